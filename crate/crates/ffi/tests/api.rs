use std::ffi::{c_char, CStr, CString};
use std::ptr;

use manifold_volumes::ExactVolume;
use manifold_volumes_ffi::*;
use proptest::prelude::*;

fn volume(family: &str, params: &[u32]) -> Result<*mut MvVolume, MvStatus> {
    let family = CString::new(family).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { mv_volume(family.as_ptr(), params.as_ptr(), params.len(), &mut out) };
    if status == MvStatus::Ok {
        Ok(out)
    } else {
        assert!(out.is_null());
        Err(status)
    }
}

fn parse(text: &str) -> *mut MvVolume {
    let text = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mv_volume_parse(text.as_ptr(), &mut out) }, MvStatus::Ok);
    out
}

fn render(v: *const MvVolume) -> String {
    let mut written = 0usize;
    assert_eq!(
        unsafe { mv_volume_render(v, ptr::null_mut(), 0, &mut written) },
        MvStatus::BufferTooSmall
    );
    let mut buf = vec![0u8; written + 1];
    assert_eq!(
        unsafe { mv_volume_render(v, buf.as_mut_ptr().cast(), buf.len(), &mut written) },
        MvStatus::Ok
    );
    CStr::from_bytes_with_nul(&buf).unwrap().to_str().unwrap().to_string()
}

fn last_error() -> String {
    let p = mv_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn approx(v: *const MvVolume) -> f64 {
    let mut x = f64::NAN;
    assert_eq!(unsafe { mv_volume_approx(v, &mut x) }, MvStatus::Ok);
    x
}

#[test]
fn matches_core_library() {
    let cases: [(&str, &[u32]); 6] =
        [("sphere", &[5]), ("cp", &[3]), ("su", &[4]), ("sp", &[2]), ("flag", &[2, 1]), ("spin", &[7])];
    for (family, params) in cases {
        let v = volume(family, params).unwrap();
        let expected = manifold_volumes::ManifoldId::new(manifold_volumes::Family::from_key(family).unwrap(), params.to_vec())
            .unwrap()
            .volume()
            .unwrap();
        assert_eq!(render(v), expected.to_string());
        assert_eq!(approx(v), expected.approx());
        let mut k = 0;
        assert_eq!(unsafe { mv_volume_pi_pow(v, &mut k) }, MvStatus::Ok);
        assert_eq!(k, expected.pi_pow());
        unsafe { mv_volume_free(v) };
    }
}

#[test]
fn error_codes() {
    assert_eq!(volume("torus", &[2]), Err(MvStatus::InvalidArgument));
    assert!(last_error().contains("torus"));
    assert_eq!(volume("op", &[3]), Err(MvStatus::Unsupported));
    assert_eq!(volume("su", &[]), Err(MvStatus::InvalidArgument));

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mv_volume(ptr::null(), ptr::null(), 0, &mut out) }, MvStatus::NullPointer);
    assert_eq!(unsafe { mv_volume_approx(ptr::null(), ptr::null_mut()) }, MvStatus::NullPointer);

    let bad = [0xffu8, 0];
    assert_eq!(unsafe { mv_volume_parse(bad.as_ptr().cast::<c_char>(), &mut out) }, MvStatus::InvalidUtf8);

    let a = parse("π^2");
    let zero = parse("0");
    let pi3 = parse("π^3");
    assert_eq!(unsafe { mv_volume_div(a, zero, &mut out) }, MvStatus::DivideByZero);
    assert_eq!(unsafe { mv_volume_div(a, pi3, &mut out) }, MvStatus::InvalidArgument);
    assert!(out.is_null());

    let xi = CString::new("g2").unwrap();
    assert_eq!(
        unsafe { mv_volume_with_xi(xi.as_ptr(), ptr::null(), 0, 1, 0, &mut out) },
        MvStatus::DivideByZero
    );

    // a successful call clears the message
    let v = volume("sphere", &[2]).unwrap();
    assert!(mv_last_error_message().is_null());
    unsafe {
        mv_volume_free(v);
        mv_volume_free(a);
        mv_volume_free(zero);
        mv_volume_free(pi3);
    }
}

#[test]
fn xi_scaling() {
    let g2 = CString::new("g2").unwrap();
    let mut one = ptr::null_mut();
    let mut two = ptr::null_mut();
    unsafe {
        assert_eq!(mv_volume_with_xi(g2.as_ptr(), ptr::null(), 0, 1, 1, &mut one), MvStatus::Ok);
        assert_eq!(mv_volume_with_xi(g2.as_ptr(), ptr::null(), 0, 2, 1, &mut two), MvStatus::Ok);
    }
    assert_eq!(approx(two), 2.0 * approx(one));
    unsafe {
        mv_volume_free(one);
        mv_volume_free(two);
    }
}

#[test]
fn json_round_trip() {
    let v = volume("su", &[5]).unwrap();
    let mut written = 0;
    let mut buf = vec![0u8; 4];
    assert_eq!(
        unsafe { mv_volume_to_json(v, buf.as_mut_ptr().cast(), buf.len(), &mut written) },
        MvStatus::BufferTooSmall
    );
    buf.resize(written + 1, 0);
    assert_eq!(
        unsafe { mv_volume_to_json(v, buf.as_mut_ptr().cast(), buf.len(), &mut written) },
        MvStatus::Ok
    );
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { mv_volume_from_json(buf.as_ptr().cast(), &mut back) }, MvStatus::Ok);
    let mut eq = false;
    assert_eq!(unsafe { mv_volume_equal(v, back, &mut eq) }, MvStatus::Ok);
    assert!(eq);
    unsafe {
        mv_volume_free(v);
        mv_volume_free(back);
    }
}

#[test]
fn integration_and_states() {
    let chart = CString::new("so3-euler").unwrap();
    let mut exact = ptr::null_mut();
    assert_eq!(unsafe { mv_chart_exact_volume(chart.as_ptr(), &mut exact) }, MvStatus::Ok);
    let target = approx(exact);

    let mut quad = MvIntegrationResult { estimate: 0.0, std_error: 0.0, evaluations: 0, method: MvMethod::MonteCarlo };
    assert_eq!(
        unsafe { mv_integrate_chart(chart.as_ptr(), MvMethod::Quadrature, 40, 0, 0, 0, &mut quad) },
        MvStatus::Ok
    );
    assert_eq!(quad.method, MvMethod::Quadrature);
    assert!((quad.estimate - target).abs() < 1e-10 * target);

    let mut mc = quad;
    let mut again = quad;
    unsafe {
        assert_eq!(mv_integrate_chart(chart.as_ptr(), MvMethod::MonteCarlo, 0, 50_000, 3, 4, &mut mc), MvStatus::Ok);
        assert_eq!(mv_integrate_chart(chart.as_ptr(), MvMethod::MonteCarlo, 0, 50_000, 3, 4, &mut again), MvStatus::Ok);
    }
    assert_eq!(mc, again);
    assert_eq!(mc.evaluations, 50_000);
    assert!((mc.estimate - target).abs() < 5.0 * mc.std_error);

    let unknown = CString::new("klein").unwrap();
    assert_eq!(
        unsafe { mv_integrate_chart(unknown.as_ptr(), MvMethod::Quadrature, 8, 0, 0, 0, &mut mc) },
        MvStatus::InvalidArgument
    );

    let mut d = 0;
    assert_eq!(unsafe { mv_orbit_dimension(5, [3u32, 1, 1].as_ptr(), 3, &mut d) }, MvStatus::Ok);
    assert_eq!(d, 25 - 9 - 1 - 1);
    assert_eq!(unsafe { mv_orbit_dimension(5, [3u32, 1].as_ptr(), 2, &mut d) }, MvStatus::InvalidArgument);

    assert!(mv_su3_positivity(0.0, 0.0));
    assert!(!mv_su3_positivity(2.0, 0.0));
    unsafe { mv_volume_free(exact) };
}

#[test]
fn static_strings() {
    let version = unsafe { CStr::from_ptr(mv_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    let name = unsafe { CStr::from_ptr(mv_status_name(MvStatus::BufferTooSmall)) };
    assert_eq!(name.to_str().unwrap(), "buffer too small");
}

proptest! {
    #[test]
    fn product_matches_core(a in 1i64..500, b in 1i64..500, m in 1u32..50, k in 0u32..6, j in 0u32..6) {
        let x = format!("({a}/{b})·√{m}·π^{k}");
        let y = format!("({b}/{a})·π^{j}");
        let (px, py) = (parse(&x), parse(&y));
        let mut prod = ptr::null_mut();
        prop_assert_eq!(unsafe { mv_volume_mul(px, py, &mut prod) }, MvStatus::Ok);
        let ex: ExactVolume = x.parse().unwrap();
        let ey: ExactVolume = y.parse().unwrap();
        prop_assert_eq!(render(prod), ex.mul(&ey).to_string());
        let mut quotient = ptr::null_mut();
        prop_assert_eq!(unsafe { mv_volume_div(prod, py, &mut quotient) }, MvStatus::Ok);
        let mut eq = false;
        prop_assert_eq!(unsafe { mv_volume_equal(quotient, px, &mut eq) }, MvStatus::Ok);
        prop_assert!(eq);
        unsafe {
            mv_volume_free(px);
            mv_volume_free(py);
            mv_volume_free(prod);
            mv_volume_free(quotient);
        }
    }
}
