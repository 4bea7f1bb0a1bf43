//! Randomized invariants: algebra and Hopf structure on random words, the text
//! round trip, sampled points of `V` and the central-character separators.

use proptest::prelude::*;
use qroots_core::center_azumaya::{omega_geometric, perturb_off_v, sample_v_points, v_contains, ClassicalFn};
use qroots_core::diffops::Which;
use qroots_core::qreps::{chi_of_binomial, chi_separator};
use qroots_core::qscalars::QScalar;
use qroots_core::rootdata::{CartanType, RootDatum, Weight};
use qroots_core::suites::Config;
use qroots_core::uqalg::{UElem, Uq};

fn algebra(t: CartanType) -> Uq {
    let ell = if t == CartanType::A2 { 5 } else { 3 };
    Config::new(t, ell).unwrap().algebra().unwrap()
}

/// Generator letters: `0..r` is `e_i`, `r..2r` is `f_i`, `2r..3r` is `k_i`,
/// `3r..4r` is `k_i^-1`.
fn letter(u: &Uq, c: usize) -> UElem {
    let r = u.rank();
    let (kind, i) = (c / r, c % r);
    match kind {
        0 => u.e(i),
        1 => u.f(i),
        2 => u.ki(i),
        _ => u.k(Weight::ZERO - u.alpha(i)),
    }
}

/// `sum_j c_j * word_j`, at most two words of length at most two.
fn elem(u: &Uq, terms: &[(i32, Vec<usize>)]) -> UElem {
    let mut x = UElem::zero();
    for (c, w) in terms {
        let mut m = UElem::one();
        for &l in w {
            m = u.mul(&m, &letter(u, l % (4 * u.rank())));
        }
        x.add_assign(&m.scale(&QScalar::monomial(*c as i128, c % 3)));
    }
    x
}

fn terms() -> impl Strategy<Value = Vec<(i32, Vec<usize>)>> {
    prop::collection::vec((-3i32..=3, prop::collection::vec(0usize..8, 0..=2)), 1..=2)
}

fn cartan() -> impl Strategy<Value = CartanType> {
    prop_oneof![Just(CartanType::A1), Just(CartanType::A2), Just(CartanType::B2)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplication_is_associative(t in cartan(), a in terms(), b in terms(), c in terms()) {
        let u = algebra(t);
        let (a, b, c) = (elem(&u, &a), elem(&u, &b), elem(&u, &c));
        prop_assert_eq!(u.mul(&u.mul(&a, &b), &c), u.mul(&a, &u.mul(&b, &c)));
    }

    #[test]
    fn coproduct_is_multiplicative(t in cartan(), a in terms(), b in terms()) {
        let u = algebra(t);
        let (a, b) = (elem(&u, &a), elem(&u, &b));
        let lhs = u.coproduct(&u.mul(&a, &b));
        let rhs = u.tensor_mul(&u.coproduct(&a), &u.coproduct(&b));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn antipode_reverses_products(t in cartan(), a in terms(), b in terms()) {
        let u = algebra(t);
        let (a, b) = (elem(&u, &a), elem(&u, &b));
        let lhs = u.antipode(&u.mul(&a, &b));
        let rhs = u.mul(&u.antipode(&b), &u.antipode(&a));
        prop_assert_eq!(u.antipode_inv(&lhs), u.mul(&a, &b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hopf_axioms_hold(t in cartan(), a in terms()) {
        let u = algebra(t);
        let (coassoc, s_left, s_right, c_left, c_right) = u.hopf_defects(&elem(&u, &a));
        prop_assert!(coassoc.is_zero());
        prop_assert!(s_left.is_zero() && s_right.is_zero());
        prop_assert!(c_left.is_zero() && c_right.is_zero());
    }

    #[test]
    fn text_round_trip(t in cartan(), a in terms()) {
        let u = algebra(t);
        let x = elem(&u, &a);
        let s = u.format_elem(&x);
        prop_assert_eq!(u.parse_elem(&s).unwrap(), x, "{}", s);
    }

    #[test]
    fn sampled_points_lie_on_v(seed in any::<u64>(), m in 1u32..=3, n in 0u32..=3) {
        let n = n.min(m);
        let ell = 3;
        let phi = ClassicalFn::monomial(m, n);
        for p in sample_v_points(ell, 2, seed) {
            prop_assert!(v_contains(&p, ell));
            prop_assert_eq!(omega_geometric(&phi, Which::One, &p, ell), omega_geometric(&phi, Which::Two, &p, ell));
            prop_assert!(!v_contains(&perturb_off_v(&p), ell));
        }
    }

    #[test]
    fn chi_separator_separates(t in cartan(), l in prop::collection::vec(-4i32..=4, 2), m in prop::collection::vec(-4i32..=4, 2)) {
        let rd = RootDatum::new(t, None).unwrap();
        let (lambda, mu) = (Weight::new(&l[..rd.rank]), Weight::new(&m[..rd.rank]));
        match chi_separator(&rd, lambda, mu) {
            None => prop_assert_eq!(lambda, mu),
            Some((i, c, s)) => {
                prop_assert!(chi_of_binomial(&rd, lambda, i, c, s).is_one());
                prop_assert!(chi_of_binomial(&rd, mu, i, c, s).is_zero());
            }
        }
    }

    #[test]
    fn config_text_round_trip(ell in prop::sample::select(vec![3u32, 5, 7]), depth in 1i32..6, seed in any::<u64>()) {
        let text = format!("# sample\ntype = A1\nell = {ell}\ndepth = {depth}\nseed = {seed}\n");
        let c = Config::parse(&text).unwrap();
        prop_assert_eq!(c.ell, ell);
        prop_assert_eq!(c.depth, depth);
        prop_assert_eq!(c.seed, seed);
    }
}
