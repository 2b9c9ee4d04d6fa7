#![no_main]

use libfuzzer_sys::fuzz_target;
use wavemark::{read_wav, write_wav};

// Anything the parser accepts must survive a rewrite: the re-read signal is
// identical and a second write is byte-stable.
fuzz_target!(|data: &[u8]| {
    let Ok(signal) = read_wav(data) else { return };
    let format = signal.source_format;
    let rewritten = write_wav(&signal, format);
    let back = read_wav(&rewritten).expect("rewritten container must parse");
    assert_eq!(back.channels, signal.channels);
    assert_eq!(back.sample_rate, signal.sample_rate);
    assert_eq!(back.extra_chunks, signal.extra_chunks);
    assert_eq!(write_wav(&back, format), rewritten);
});
