use parrondo_cli::format::sig;
use parrondo_cli::output::{read_csv, write_csv};
use parrondo_core::{CellStatus, SweepCell};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![0.0f64..1.0, -1e3f64..1e3, 1e-18f64..1e-6, Just(0.0)]
}

fn cell() -> impl Strategy<Value = SweepCell> {
    (
        finite(),
        finite(),
        finite(),
        finite(),
        prop_oneof![finite(), Just(f64::NAN)],
        any::<bool>(),
        prop::option::of(finite()),
    )
        .prop_map(|(eps, r, p1, p2, pmix, effect, qgap)| SweepCell {
            eps_index: 0,
            r_index: 0,
            eps,
            r,
            p_gain_1: p1,
            p_gain_2: p2,
            p_gain_mix: pmix,
            effect,
            quantum_gap: qgap,
            status: CellStatus::Ok,
        })
}

fn same_digits(a: f64, b: f64) -> bool {
    sig(a) == sig(b)
}

proptest! {
    #[test]
    fn emitted_digits_survive_round_trip(cells in prop::collection::vec(cell(), 1..20)) {
        let mut buf = Vec::new();
        write_csv(&mut buf, &cells).unwrap();
        let rows = read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(rows.len(), cells.len());
        for (row, c) in rows.iter().zip(&cells) {
            prop_assert!(same_digits(row.eps, c.eps));
            prop_assert!(same_digits(row.r, c.r));
            prop_assert!(same_digits(row.p1, c.p_gain_1));
            prop_assert!(same_digits(row.p2, c.p_gain_2));
            prop_assert!(same_digits(row.pmix, c.p_gain_mix));
            prop_assert_eq!(row.effect, c.effect);
            prop_assert_eq!(row.qgap.map(sig), c.quantum_gap.map(sig));
            if c.p_gain_1 != 0.0 {
                prop_assert!(((row.p1 - c.p_gain_1) / c.p_gain_1).abs() <= 5e-12);
            }
        }
    }
}
