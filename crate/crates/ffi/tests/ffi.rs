use dseqsync_ffi::*;
use std::ffi::CStr;
use std::f64::consts::PI;
use std::ptr;

fn interleave(v: &[(f64, f64)]) -> Vec<f64> {
    v.iter().flat_map(|&(r, i)| [r, i]).collect()
}

/// `e^{jμn}·d[n]` for an interleaved sequence.
fn rotate(d: &[f64], mu: f64) -> Vec<f64> {
    let pts: Vec<(f64, f64)> = d
        .chunks_exact(2)
        .enumerate()
        .map(|(n, c)| {
            let (s, co) = (mu * n as f64).sin_cos();
            (c[0] * co - c[1] * s, c[0] * s + c[1] * co)
        })
        .collect();
    interleave(&pts)
}

#[test]
fn aux_roundtrip_through_handles() {
    let n = 64;
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(ds_aux_estimator_new(0.0, 1, n, &mut h), DsStatus::Ok);
        let (mut d0, mut d1) = (vec![0.0; 2 * n], vec![0.0; 2 * n]);
        assert_eq!(ds_aux_sequences(h, d0.as_mut_ptr(), d1.as_mut_ptr(), n), DsStatus::Ok);
        let mu = 2.0 * PI * 0.37 / n as f64;
        let (q0, q1) = (rotate(&d0, mu), rotate(&d1, mu));
        let mut got = f64::NAN;
        assert_eq!(ds_aux_estimate(h, q0.as_ptr(), q1.as_ptr(), n, &mut got), DsStatus::Ok);
        assert!((got - mu).abs() < 1e-12);
        ds_aux_estimator_free(h);
    }
}

#[test]
fn sumdiff_roundtrip_through_handles() {
    let n = 64;
    let eta = -2.0 * PI / n as f64;
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(ds_sumdiff_estimator_new(eta, n, &mut h), DsStatus::Ok);
        let (mut ds, mut dd) = (vec![0.0; 2 * n], vec![0.0; 2 * n]);
        assert_eq!(ds_sumdiff_sequences(h, ds.as_mut_ptr(), dd.as_mut_ptr(), n), DsStatus::Ok);
        let mu = 2.0 * PI * -0.4 / n as f64;
        let mut got = f64::NAN;
        let (qs, qd) = (rotate(&ds, mu), rotate(&dd, mu));
        assert_eq!(ds_sumdiff_estimate(h, qs.as_ptr(), qd.as_ptr(), n, &mut got), DsStatus::Ok);
        assert!((got - mu).abs() < 1e-12);
        ds_sumdiff_estimator_free(h);
    }
}

#[test]
fn zc_estimate_on_reference_is_zero() {
    let n = 64;
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(ds_zc_estimator_new(63, 25, n, &mut h), DsStatus::Ok);
        let mut s = vec![0.0; 2 * n];
        assert_eq!(ds_zc_symbol(h, s.as_mut_ptr(), n), DsStatus::Ok);
        let mut got = f64::NAN;
        assert_eq!(ds_zc_estimate(h, s.as_ptr(), n, &mut got), DsStatus::Ok);
        assert!(got.abs() < 1e-12);
        ds_zc_estimator_free(h);
    }
}

#[test]
fn error_codes() {
    let mut h = ptr::null_mut();
    let mut x = 0.0;
    unsafe {
        assert_eq!(ds_aux_estimator_new(0.0, 40, 64, &mut h), DsStatus::InvalidParameter);
        assert!(h.is_null());
        assert_eq!(ds_aux_estimator_new(0.0, 1, 64, ptr::null_mut()), DsStatus::NullPointer);
        assert_eq!(ds_aux_estimate(ptr::null(), ptr::null(), ptr::null(), 4, &mut x), DsStatus::NullPointer);

        assert_eq!(ds_aux_estimator_new(0.0, 1, 8, &mut h), DsStatus::Ok);
        let zeros = vec![0.0; 16];
        assert_eq!(ds_aux_estimate(h, zeros.as_ptr(), zeros.as_ptr(), 8, &mut x), DsStatus::DegenerateChannels);
        let mut short = vec![0.0; 8];
        assert_eq!(ds_aux_sequences(h, short.as_mut_ptr(), short.clone().as_mut_ptr(), 4), DsStatus::LengthMismatch);
        ds_aux_estimator_free(h);
        ds_aux_estimator_free(ptr::null_mut());

        let msg = CStr::from_ptr(ds_status_str(DsStatus::NullPointer)).to_str().unwrap();
        assert_eq!(msg, "null pointer argument");
    }
}

#[test]
fn kappa_and_variances() {
    let mut k = 0.0;
    unsafe {
        assert_eq!(ds_kappa_for_bits(1, &mut k), DsStatus::Ok);
        assert!((k - (1.0 - 2.0 / PI)).abs() < 1e-12);
        assert_eq!(ds_kappa_for_bits(0, &mut k), DsStatus::Ok);
        assert_eq!(k, 0.0);
        assert_eq!(ds_kappa_for_bits(40, &mut k), DsStatus::InvalidParameter);

        let n = 64;
        let delta = 2.0 * PI / n as f64;
        let mu = 0.5 * delta;
        let mut v = 0.0;
        assert_eq!(ds_lemma1_variance(n, 0.1175, 0.0, delta, mu, 10.0, 0.0, &mut v), DsStatus::Ok);
        assert!(v.is_finite() && v > 0.0);
        assert_eq!(ds_lemma2_variance(n, 0.1175, -delta, -0.5 * delta, 10.0, 0.0, &mut v), DsStatus::Ok);
        assert!(v.is_finite() && v > 0.0);
        assert_eq!(ds_lemma2_variance(n, 1.5, 0.0, 0.1, 10.0, 0.0, &mut v), DsStatus::InvalidParameter);
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dseqsync.h")).unwrap();
    for sym in [
        "typedef struct DsAuxEstimator DsAuxEstimator",
        "DS_STATUS_NULL_POINTER",
        "ds_aux_estimate(",
        "ds_sumdiff_estimate(",
        "ds_zc_estimate(",
        "ds_kappa_for_bits(",
        "ds_lemma1_variance(",
        "ds_status_str(",
    ] {
        assert!(h.contains(sym), "header lacks {sym}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Some(cc) = find_cc() else { return };
    let dir = scratch_dir();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"dseqsync.h\"\nint main(void) { double k; return ds_kappa_for_bits(2, &k) == DS_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let inc = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", inc])
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn find_cc() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
}

fn scratch_dir() -> std::path::PathBuf {
    let d = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi-header");
    std::fs::create_dir_all(&d).unwrap();
    d
}
