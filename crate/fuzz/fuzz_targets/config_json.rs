#![no_main]

use libfuzzer_sys::fuzz_target;
use wavemark::Config;

fuzz_target!(|data: &[u8]| {
    let Ok(cfg) = Config::from_json(data) else { return };
    // JSON numbers such as 1e999 parse to infinity, which does not survive
    // serialization; only finite configs are required to round-trip.
    let finite = cfg.scale.is_none_or(f64::is_finite)
        && cfg.swap.origin_hz.is_finite()
        && cfg.swap.tau.is_none_or(f64::is_finite)
        && cfg.mos_n_const.is_finite();
    if finite {
        let text = serde_json::to_vec(&cfg).expect("config serializes");
        let again = Config::from_json(&text).expect("serialized config reparses");
        assert_eq!(again, cfg);
    }
});
