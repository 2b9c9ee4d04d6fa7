#![no_main]

use libfuzzer_sys::fuzz_target;
use wavemark::{plan_layout, read_wav, verify, Mode};

// Blind extraction over attacker-controlled containers: decode whatever the
// parser accepts and check it against a fixed claim. Any outcome is fine;
// panicking is not. Length is capped to keep the transforms fast.
fuzz_target!(|data: &[u8]| {
    let Ok(signal) = read_wav(data) else { return };
    if signal.frames() == 0 || signal.frames() > 1 << 14 {
        return;
    }
    let scale = Mode::Pcm16.default_scale();
    let Ok(layout) = plan_layout(signal.frames(), signal.sample_rate, scale) else {
        return;
    };
    let _ = verify(&signal, b"fuzz probe claim", &layout);
});
