//! End-to-end comparisons of closed forms with the quadrature oracles.

use hyppoisson_core::harmonics::{zonal_harmonic, BoundaryPoint};
use hyppoisson_core::quadrature::{reference_mass, zonal_integral};
use hyppoisson_core::spherical::{elementary_spherical, generalized_spherical, generalized_spherical_terms, RadialExponent};
use hyppoisson_core::transform::{
    inversion_approx, poisson_quadrature, poisson_quadrature_kfinite, poisson_quadrature_off_axis, poisson_spectral,
};
use hyppoisson_core::{Complex, KFiniteFunction, KTypeIndex, SpectralParams, ZonalGrid};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn kt(p: i64, q: i64) -> KTypeIndex {
    KTypeIndex::new(p, q).unwrap()
}

fn grid(n: u32) -> ZonalGrid {
    ZonalGrid::normalized(n, 192).unwrap()
}

#[test]
fn elementary_function_at_half_radius() {
    let g = grid(2);
    let p = SpectralParams::with_i_lambda(2, 0, c(1.0, 0.0)).unwrap();
    let closed = elementary_spherical(&p, 0.5).unwrap();
    let quad = poisson_quadrature(&p, |_| c(1.0, 0.0), 0.5, &g).unwrap();
    assert!((quad - closed).norm() < 1e-7 * closed.norm());
}

#[test]
fn origin_integrand_gives_reference_mass() {
    let g = grid(4);
    let p = SpectralParams::with_i_lambda(4, 0, c(0.3, 2.0)).unwrap();
    let at_zero = poisson_quadrature(&p, |_| c(1.0, 0.0), 0.0, &g).unwrap();
    assert!((at_zero.re - reference_mass(4).unwrap()).abs() < 1e-13);
    assert!((at_zero - elementary_spherical(&p, 0.0).unwrap()).norm() < 1e-13);
}

#[test]
fn generalized_function_for_half_integral_l() {
    let g = grid(2);
    let p = SpectralParams::with_i_lambda(2, 1, c(1.5, 0.0)).unwrap();
    let k = kt(1, 3);
    let pole = BoundaryPoint::from_angles(2, 0.0, 0.0).unwrap();
    let at_pole = zonal_harmonic(k, 2, &pole).unwrap();
    let v = generalized_spherical(&p, k, 0.6).unwrap();
    let quad = poisson_quadrature_kfinite(&p, &KFiniteFunction::single(k, c(1.0, 0.0)), 0.6, &g).unwrap();
    assert!((quad - v * at_pole).norm() < 1e-6 * v.norm());

    let k = kt(2, 2);
    let v = generalized_spherical(&p, k, 0.4).unwrap();
    let quad = poisson_quadrature_kfinite(&p, &KFiniteFunction::single(k, c(1.0, 0.0)), 0.4, &g).unwrap();
    assert!((quad - v).norm() < 1e-6 * v.norm());
}

#[test]
fn printed_radial_power_is_rejected_by_the_oracle() {
    let g = grid(2);
    let p = SpectralParams::with_i_lambda(2, 0, c(1.5, 0.0)).unwrap();
    let k = kt(1, 3);
    let f = KFiniteFunction::single(k, c(1.0, 0.0));
    let ratio = |e: RadialExponent, r: f64| {
        poisson_quadrature_kfinite(&p, &f, r, &g).unwrap() / generalized_spherical_terms(&p, k, r, e).unwrap().value()
    };
    let (q_lo, q_hi) = (ratio(RadialExponent::Q, 0.2), ratio(RadialExponent::Q, 0.8));
    let (p_lo, p_hi) = (ratio(RadialExponent::P, 0.2), ratio(RadialExponent::P, 0.8));
    assert!((q_lo - q_hi).norm() < 1e-10);
    assert!((p_lo - p_hi).norm() > 0.1);
}

#[test]
fn spectral_and_quadrature_forms_agree_off_axis() {
    let g = ZonalGrid::normalized(2, 128).unwrap();
    let p = SpectralParams::with_i_lambda(2, 2, c(1.2, 0.7)).unwrap();
    let f = KFiniteFunction::new(vec![(kt(0, 0), c(1.0, 0.0)), (kt(1, 1), c(0.0, 1.0)), (kt(2, 2), c(-0.5, 0.5))]).unwrap();
    let alpha = 0.9;
    let pt = BoundaryPoint::from_angles(2, 0.0, alpha).unwrap();
    let spectral = poisson_spectral(&p, &f, 0.7, &pt).unwrap();
    let quad = poisson_quadrature_off_axis(&p, |nd| f.eval_cosines(2, nd.r, nd.cos), 0.7, alpha, &g, 48).unwrap();
    assert!((spectral - quad).norm() < 1e-8 * spectral.norm(), "{spectral} vs {quad}");
}

#[test]
fn orthogonality_of_two_ktypes() {
    let g = grid(2);
    let (a, b) = (kt(0, 2), kt(1, 1));
    let pt = |nd: &hyppoisson_core::quadrature::ZonalNode| {
        c(
            hyppoisson_core::harmonics::zonal_from_cosines(a, 2, nd.r, nd.cos)
                * hyppoisson_core::harmonics::zonal_from_cosines(b, 2, nd.r, nd.cos),
            0.0,
        )
    };
    assert!(zonal_integral(pt, &g).unwrap().norm() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_transform_is_linear(a_re in -2.0f64..2.0, a_im in -2.0f64..2.0, b_re in -2.0f64..2.0, r in 0.0f64..0.9) {
        let g = ZonalGrid::normalized(2, 48).unwrap();
        let p = SpectralParams::with_i_lambda(2, 1, c(1.5, 0.5)).unwrap();
        let (a, b) = (c(a_re, a_im), c(b_re, 0.0));
        let f = KFiniteFunction::new(vec![(kt(0, 2), a), (kt(1, 1), b)]).unwrap();
        let whole = poisson_quadrature_kfinite(&p, &f, r, &g).unwrap();
        let parts = poisson_quadrature_kfinite(&p, &KFiniteFunction::single(kt(0, 2), a), r, &g).unwrap()
            + poisson_quadrature_kfinite(&p, &KFiniteFunction::single(kt(1, 1), b), r, &g).unwrap();
        prop_assert!((whole - parts).norm() <= 1e-12 * (1.0 + whole.norm()));
    }

    #[test]
    fn inversion_multiplies_by_nonnegative_reals(re in -3.0f64..3.0, im in -3.0f64..3.0, r in 0.0f64..0.999,
                                                  il_re in 0.1f64..4.0, il_im in -3.0f64..3.0) {
        let p = SpectralParams::with_i_lambda(3, 2, c(il_re, il_im)).unwrap();
        let f = KFiniteFunction::new(vec![(kt(0, 0), c(re, im)), (kt(2, 4), c(im, -re))]).unwrap();
        let g = inversion_approx(&p, &f, r).unwrap();
        for (&(_, a), &(_, b)) in f.terms().iter().zip(g.terms()) {
            if a.norm() > 0.0 {
                let ratio = b / a;
                prop_assert!(ratio.re >= 0.0 && ratio.im.abs() <= 1e-14 * ratio.re.max(1e-300));
            }
        }
    }
}
