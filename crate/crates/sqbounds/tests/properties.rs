//! Property-based checks over randomized parameter points.

use proptest::prelude::*;
use std::f64::consts::PI;

use sqbounds::bounds::{qfim_closed, scalar_bounds, uhlmann_closed};
use sqbounds::cli::parse_angle;
use sqbounds::gaussian::evolve_moments;
use sqbounds::generaldyne::{cfi_matrix, gaussian_qfi, GeneralDyneSetting};
use sqbounds::params::{default_numerics, ModelParams};
use sqbounds::report::{BoundReport, ReportOptions};

fn params() -> impl Strategy<Value = ModelParams> {
    (
        0.0..1.5f64,
        0.0..1.0f64,
        0.0..2.5f64,
        -PI..PI,
        -PI..PI,
    )
        .prop_map(|(l1, l2, a, th, ph)| ModelParams::new(l1, l2, a, th, ph).unwrap())
}

proptest! {
    #[test]
    fn closed_forms_periodic_in_phi_and_theta(p in params()) {
        let q0 = qfim_closed(&p);
        let u0 = uhlmann_closed(&p);
        let scale = q0.abs().max().max(1.0);
        let shifted = [
            ModelParams { phi: p.phi + 2.0 * PI, ..p },
            ModelParams { theta: p.theta + PI, ..p },
        ];
        for s in shifted {
            let q = qfim_closed(&s);
            let u = uhlmann_closed(&s);
            prop_assert!((q - q0).abs().max() <= 1e-12 * scale);
            prop_assert!((u - u0).abs().max() <= 1e-12 * scale);
        }
    }

    #[test]
    fn covariance_is_pure_and_positive(p in params()) {
        let g = evolve_moments(&p);
        prop_assert!((g.cov.determinant() - 0.25).abs() <= 1e-10);
        prop_assert!(g.cov[(0, 0)] > 0.0 && g.cov[(1, 1)] > 0.0);
    }

    #[test]
    fn scalar_invariants(p in params()) {
        let sb = scalar_bounds(&qfim_closed(&p), &uhlmann_closed(&p), 1e-12);
        if let Some(r) = sb.r {
            prop_assert!((-1e-10..=1.0 + 1e-9).contains(&r));
            prop_assert!(sb.t_i <= r + 1e-9);
            let cq = sb.c_q.unwrap();
            prop_assert!(cq <= sb.bracket_t.unwrap() + 1e-12);
            prop_assert!(sb.bracket_t.unwrap() <= sb.bracket_r.unwrap() + 1e-12);
        } else {
            prop_assert!(sb.singular);
        }
    }

    #[test]
    fn classical_fisher_below_quantum(p in params(), logz in -2.0..2.0f64) {
        // compare against the QFI of the same phase-space family; qfim_closed
        // lives in the conjugate angle convention and is not the dominating
        // matrix here
        let s = GeneralDyneSetting::new(logz.exp()).unwrap();
        let q = gaussian_qfi(&p);
        let gap = q - cfi_matrix(&p, &s).f;
        let scale = q.abs().max().max(1.0);
        prop_assert!(gap.symmetric_eigenvalues().min() >= -1e-8 * scale);
    }

    #[test]
    fn report_serialization_roundtrips(p in params()) {
        let r = BoundReport::compute(&p, &default_numerics(), &ReportOptions::default()).unwrap();
        let js = serde_json::to_string(&r).unwrap();
        let back: BoundReport = serde_json::from_str(&js).unwrap();
        prop_assert_eq!(&back, &r);

        // CSV cells reparse to the exact float
        let row = r.csv_row(None);
        let cells: Vec<&str> = row.split(',').collect();
        prop_assert_eq!(cells[5].parse::<f64>().unwrap(), r.q11);
        prop_assert_eq!(cells[8].parse::<f64>().unwrap(), r.u12);
        if let Some(cq) = r.c_q {
            prop_assert_eq!(cells[13].parse::<f64>().unwrap(), cq);
        }
    }

    #[test]
    fn pi_fraction_parsing(num in 1u32..12, den in 1u32..12) {
        let s = format!("{num}pi/{den}");
        let v = parse_angle(&s).unwrap();
        prop_assert!((v - num as f64 * PI / den as f64).abs() <= 1e-15 * v.abs());
        let neg = parse_angle(&format!("-{s}")).unwrap();
        prop_assert_eq!(neg, -v);
    }
}
