//! Statistical properties of the generated signals: covariance, energy, and
//! the structure shared between the difference operator and its mixed variant.

use cosparse_core::dictionary::{make_dif, make_mix};
use cosparse_core::linalg::nullspace_projector;
use cosparse_core::signal::{add_noise, draw_cosupport, project_signal, CoSupport};

#[test]
fn sample_covariance_matches_projector() {
    let dict = make_dif(3).unwrap();
    let cosupport = draw_cosupport(&dict, 2, 11, 0).unwrap();
    let d = dict.d();
    let n = 50_000usize;
    let mut cov = vec![0.0f64; d * d];
    for t in 0..n {
        let sig = project_signal(&dict, &cosupport, 1.0, 11, 100 + t as u64).unwrap();
        for i in 0..d {
            for j in 0..d {
                cov[i * d + j] += sig.x[i] * sig.x[j];
            }
        }
    }
    for v in cov.iter_mut() {
        *v /= n as f64;
    }
    let target = nullspace_projector(&dict.submatrix(cosupport.indices()).unwrap());
    let mut err = 0.0f64;
    let mut norm = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let t = target.get(i, j);
            err += (cov[i * d + j] - t) * (cov[i * d + j] - t);
            norm += t * t;
        }
    }
    let rel = (err / norm).sqrt();
    assert!(rel <= 0.05, "relative Frobenius error {rel}");
}

#[test]
fn signal_energy_concentrates_at_r_sigma_u_sq() {
    let dict = make_dif(3).unwrap();
    let r = 2usize;
    let n = 10_000usize;
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for t in 0..n {
        let cs = draw_cosupport(&dict, r, 21, t as u64).unwrap();
        let sig = project_signal(&dict, &cs, 1.0, 22, t as u64).unwrap();
        let e: f64 = sig.x.iter().map(|v| v * v).sum();
        sum += e;
        sum_sq += e * e;
    }
    let mean = sum / n as f64;
    let var = (sum_sq / n as f64 - mean * mean).max(0.0);
    let se = (var / n as f64).sqrt();
    assert!(
        (mean - r as f64).abs() <= 3.0 * se,
        "mean energy {mean}, expected {r} +/- {}",
        3.0 * se
    );
}

#[test]
fn noise_energy_concentrates_at_d_sigma_sq() {
    let dict = make_dif(3).unwrap();
    let sigma = 0.3f64;
    let n = 10_000usize;
    let cs = draw_cosupport(&dict, 2, 31, 0).unwrap();
    let sig = project_signal(&dict, &cs, 1.0, 31, 1).unwrap();
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for t in 0..n {
        let inst = add_noise(&sig, sigma, 32, t as u64).unwrap();
        let e: f64 = inst.noise().iter().map(|v| v * v).sum();
        sum += e;
        sum_sq += e * e;
    }
    let mean = sum / n as f64;
    let expect = dict.d() as f64 * sigma * sigma;
    let var = (sum_sq / n as f64 - mean * mean).max(0.0);
    let se = (var / n as f64).sqrt();
    assert!((mean - expect).abs() <= 3.0 * se);
}

#[test]
fn effective_cosupport_contains_generating_subset() {
    let dict = make_dif(3).unwrap();
    for t in 0..500u64 {
        let cs = draw_cosupport(&dict, 2, 41, t).unwrap();
        let sig = project_signal(&dict, &cs, 1.0, 42, t).unwrap();
        for &j in cs.indices() {
            assert!(sig.effective_cosupport.contains(j));
        }
        assert_eq!(sig.effective_cosupport.corank(), dict.d() - 2);
    }
}

#[test]
fn mixed_operator_shares_closure_structure_with_differences() {
    let dif = make_dif(3).unwrap();
    let mix = make_mix(3, 5).unwrap();
    for t in 0..300u64 {
        let cs = draw_cosupport(&dif, 2, 51, t).unwrap();
        let sig_dif = project_signal(&dif, &cs, 1.0, 52, t).unwrap();
        // same generating subset is valid for the mixed operator because
        // row dependencies are preserved by right-multiplication
        let cs_mix = CoSupport::new(&mix, cs.indices().to_vec()).unwrap();
        assert_eq!(cs_mix.corank(), cs.corank());
        let sig_mix = project_signal(&mix, &cs_mix, 1.0, 52, t).unwrap();
        assert_eq!(
            sig_dif.effective_cosupport.indices(),
            sig_mix.effective_cosupport.indices()
        );
    }
}
