//! Round-trip guarantee over generated samples: printing any generated
//! function and parsing it back yields a structurally identical value (and
//! in particular an a.e.-equal function).

use stepval_core::checker::{gen_stepfn, GenConfig};
use stepval_core::text::{parse_stepfn, print_stepfn};

#[test]
fn generated_samples_round_trip_exactly() {
    let cfg = GenConfig {
        seed: 2024,
        ..GenConfig::default()
    };
    for index in 0..400u64 {
        let u = gen_stepfn(&cfg, index);
        let printed = print_stepfn(&u);
        let back = parse_stepfn(&printed)
            .unwrap_or_else(|e| panic!("sample {index} failed to re-parse: {e}\n{printed}"));
        assert_eq!(back, u, "sample {index} round-trips structurally");
        assert!(back.eq_ae(&u).unwrap());
        assert_eq!(print_stepfn(&back), printed);
    }
}
