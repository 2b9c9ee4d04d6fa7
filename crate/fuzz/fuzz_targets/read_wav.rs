#![no_main]

use libfuzzer_sys::fuzz_target;

// The container parser must reject arbitrary bytes with an error, never a
// panic or an overflow.
fuzz_target!(|data: &[u8]| {
    let _ = wavemark::read_wav(data);
});
