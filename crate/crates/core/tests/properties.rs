mod common;

use common::{random_cmatrix, random_cvec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use widesense::detection::{eer, subband_energies};
use widesense::fourier::{forward, inverse, l1_norm, l2_norm};
use widesense::measurement::{ideal_matrix, make_selection, mat_vec, matrix_linf_norm, perturb};
use widesense::signal::{default_profile, synthesize_spectrum, NoiseFloorModel};
use widesense::Complex64;

fn cvec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), len)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(log_n in 0u32..10, seed in any::<u64>()) {
        let n = 1usize << log_n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_cvec(&mut rng, n, 100.0);
        let x = inverse(&r);
        let (a, b) = (l2_norm(&x), l2_norm(&r));
        prop_assert!((a - b).abs() <= 1e-10 * b.max(1e-300));
        let back = forward(&x);
        for (u, v) in back.iter().zip(&r) {
            prop_assert!((u - v).norm() <= 1e-9 * b.max(1.0));
        }
    }

    #[test]
    fn distortion_bound(m in 1usize..=64, n in 1usize..=128, scale in 1e-3f64..1e3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_cmatrix(&mut rng, m, n, scale);
        let r = random_cvec(&mut rng, n, 1.0 / scale);
        let lhs = l2_norm(&mat_vec(&v, &r).unwrap());
        let rhs = (m as f64).sqrt() * matrix_linf_norm(&v) * l1_norm(&r);
        prop_assert!(lhs <= rhs, "{lhs} > {rhs}");
    }

    #[test]
    fn linf_norm_is_absolutely_homogeneous(re in -10f64..10.0, im in -10f64..10.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_cmatrix(&mut rng, 7, 11, 2.0);
        let c = Complex64::new(re, im);
        let scaled = v.map(|z| z * c);
        let want = c.norm() * matrix_linf_norm(&v);
        prop_assert!((matrix_linf_norm(&scaled) - want).abs() <= 1e-12 * want.max(1.0));
    }

    #[test]
    fn observed_operator_is_ideal_plus_distortion(m in 1usize..=32, delta in 0f64..2.0, seed in any::<u64>()) {
        let sel = make_selection(32, m, seed).unwrap();
        let a = ideal_matrix(&sel);
        let ms = perturb(&a, delta, seed).unwrap();
        prop_assert_eq!(&ms.b, &(&ms.a + &ms.v));
        prop_assert!(ms.v.iter().all(|z| z.norm() <= delta));
        let gram = &a * a.adjoint();
        for i in 0..m {
            for j in 0..m {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((gram[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eer_is_scale_invariant(
        pairs in prop::collection::vec((1e-6f64..1.0, 1e-6f64..1.0, any::<bool>()), 1..20),
        c in 1e-6f64..1e6,
    ) {
        let new: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let std: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let mask: Vec<bool> = pairs.iter().map(|p| p.2).collect();
        let base = eer(&new, &std, &mask).unwrap();
        let sn: Vec<f64> = new.iter().map(|v| v * c).collect();
        let ss: Vec<f64> = std.iter().map(|v| v * c).collect();
        let scaled = eer(&sn, &ss, &mask).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            let (a, b) = (a.unwrap(), b.unwrap());
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn energies_are_normalized(r in cvec(48), cut in prop::collection::btree_set(1usize..48, 1..8)) {
        prop_assume!(r.iter().any(|z| z.norm_sqr() > 0.0));
        let mut edges = vec![0];
        edges.extend(cut);
        edges.push(48);
        let e = subband_energies(&r, &edges).unwrap();
        prop_assert!((e.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        prop_assert!(e.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn synthesized_magnitudes_respect_their_class(seed in any::<u64>(), uniform in any::<bool>()) {
        let mut p = default_profile();
        p.grid_size = 128;
        if uniform {
            p.noise_floor_model = NoiseFloorModel::Uniform;
        }
        let spec = synthesize_spectrum(&p, seed).unwrap();
        prop_assert_eq!(&spec.occupancy, &p.occupancy());
        for (k, z) in spec.r.iter().enumerate() {
            let iv = p.bands
                .iter()
                .find(|b| p.band_bins(b).contains(&k))
                .map(|b| b.psd_range)
                .unwrap_or(p.noise_floor_range);
            prop_assert!(z.norm() >= iv.low - 1e-9 && z.norm() <= iv.high + 1e-9);
        }
        prop_assert_eq!(synthesize_spectrum(&p, seed).unwrap(), spec);
    }
}
