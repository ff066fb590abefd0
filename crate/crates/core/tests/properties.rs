use granhydro::diagnostics::{functionals, functionals_with, moment_interpolation_check, Region};
use granhydro::io::{read_balance_into, read_diagnostics, write_balance, write_diagnostics};
use granhydro::{Balance, DiagnosticRecord, ExecMode, Floors, GasParams, Grid1D, Primitive, PrimitiveField};
use proptest::prelude::*;

fn state() -> impl Strategy<Value = Primitive> {
    (1e-3..10.0f64, -5.0..5.0f64, 1e-3..10.0f64).prop_map(|(rho, u, p)| Primitive::new(rho, u, p))
}

fn field(max: usize) -> impl Strategy<Value = PrimitiveField> {
    prop::collection::vec(state(), 2..max).prop_map(PrimitiveField::new)
}

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::ZERO | prop::num::f64::SUBNORMAL
}

proptest! {
    #[test]
    fn primitive_conserved_round_trip(w in state(), gamma in 1.05..3.0f64) {
        let (back, floored) = w.to_conserved(gamma).to_primitive(gamma, &Floors::default());
        prop_assert_eq!(floored, 0);
        prop_assert!((back.rho - w.rho).abs() <= 1e-14 * w.rho);
        prop_assert!((back.u - w.u).abs() <= 1e-12 * (1.0 + w.u.abs()));
        prop_assert!((back.p - w.p).abs() <= 1e-9 * (w.p + w.rho * w.u * w.u));
    }

    #[test]
    fn entropy_is_homogeneous(w in state(), c in 0.1..10.0f64, gamma in 1.05..3.0f64) {
        let k = w.entropy(gamma);
        let scaled = Primitive::new(c * w.rho, w.u, c.powf(gamma) * w.p).entropy(gamma);
        prop_assert!((scaled - k).abs() <= 1e-12 * k);
    }

    #[test]
    fn virial_bounded_by_inertia_and_kinetic(pf in field(200), lo in -5.0..0.0f64, len in 0.1..10.0f64) {
        let grid = Grid1D::new(lo, lo + len, pf.len()).unwrap();
        let g = GasParams::new(5.0 / 3.0, 1.0, 1).unwrap();
        let r = functionals(&pf, &grid, &g, Region::FullDomain);
        prop_assert!(r.virial * r.virial <= 4.0 * r.inertia * r.kinetic * (1.0 + 1e-12));
        prop_assert!((r.energy - r.kinetic - r.internal).abs() <= 1e-13 * r.energy);
    }

    #[test]
    fn functionals_scale_with_density(pf in field(100), c in 0.1..10.0f64) {
        let grid = Grid1D::new(-1.0, 1.0, pf.len()).unwrap();
        let g = GasParams::new(1.4, 0.5, 1).unwrap();
        let scaled = PrimitiveField::new(pf.cells.iter().map(|w| Primitive::new(c * w.rho, w.u, c * w.p)).collect());
        let a = functionals(&pf, &grid, &g, Region::FullDomain);
        let b = functionals(&scaled, &grid, &g, Region::FullDomain);
        for (x, y) in [(a.mass, b.mass), (a.momentum, b.momentum), (a.energy, b.energy), (a.inertia, b.inertia), (a.virial, b.virial)] {
            prop_assert!((y - c * x).abs() <= 1e-12 * (c * x).abs().max(1e-300));
        }
    }

    #[test]
    fn parallel_reductions_match_sequential(seed in prop::collection::vec(state(), 1..8), n in 2048usize..6000) {
        let pf = PrimitiveField::new((0..n).map(|i| seed[i % seed.len()]).collect());
        let grid = Grid1D::new(-3.0, 2.0, n).unwrap();
        let g = GasParams::new(5.0 / 3.0, 1.0, 1).unwrap();
        let a = functionals_with(&pf, &grid, &g, Region::FullDomain, ExecMode::Sequential);
        let b = functionals_with(&pf, &grid, &g, Region::FullDomain, ExecMode::Parallel);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn moment_interpolation_holds(pf in field(300), lo in -4.0..-0.1f64, hi in 0.1..4.0f64) {
        let grid = Grid1D::new(lo, hi, pf.len()).unwrap();
        let g = GasParams::new(5.0 / 3.0, 1.0, 1).unwrap();
        let rep = moment_interpolation_check(&pf, &grid, &g);
        prop_assert!(rep.satisfied, "{:?}", rep);
    }

    #[test]
    fn diagnostics_csv_round_trip(v in prop::collection::vec(finite(), 18)) {
        let rec = DiagnosticRecord {
            t: v[0], mass: v[1], momentum: v[2], energy: v[3], kinetic: v[4], internal: v[5],
            inertia: v[6], virial: v[7], entropy_mass: v[8], k_max: v[9], rho_max: v[10],
            dudx_max: v[11], dt: v[12],
            balance: Balance {
                energy_loss: v[13], entropy_loss: v[14], flux_mass: v[15], flux_inertia: v[16], flux_virial: v[17],
                ..Default::default()
            },
        };
        let dir = tempfile::tempdir().unwrap();
        let (d, b) = (dir.path().join("d.csv"), dir.path().join("b.csv"));
        write_diagnostics(&d, &[rec]).unwrap();
        write_balance(&b, &[rec]).unwrap();
        let mut back = read_diagnostics(&d).unwrap();
        read_balance_into(&b, &mut back).unwrap();
        prop_assert_eq!(back, vec![rec]);
    }
}
