use mutau::branch_moduli::{
    branch_invariants, delorme_q, eq3_lower_bound, lattice_tau_minus, prop1_ratio_bound, q_bounds, tau_minus,
    CharPair,
};
use mutau::numtheory::gcd;
use mutau::report::{decimal, four_thirds};
use mutau::sqh::{prop2_lower_bound, sigma, tau_min_sqh, BaseCaseProvider, DelormeTier, WeightPair};
use mutau::{Int, Rational};
use num_rational::Ratio;
use proptest::prelude::*;

fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
    (3i64..400, 2i64..400)
        .prop_filter("n < m, coprime", |(m, n)| n < m && gcd(m, n) == 1)
        .prop_map(|(m, n)| (n, m))
}

proptest! {
    #[test]
    fn delorme_route_invariants((n, m) in coprime_pair()) {
        let p = CharPair::<i64>::new(n, m).unwrap();
        prop_assume!(!p.is_cusp());
        let inv = branch_invariants(&p).unwrap();
        let (lo, _) = q_bounds(&p).unwrap();
        prop_assert!(inv.q >= 0);
        prop_assert!(lo <= Ratio::from_integer(inv.q));
        prop_assert_eq!(tau_minus(&p).unwrap(), lattice_tau_minus(&p));
        prop_assert!(eq3_lower_bound(&p).unwrap() <= Ratio::from_integer(inv.tau_min));
        prop_assert!(inv.ratio <= prop1_ratio_bound(&p).unwrap());
        prop_assert!(inv.ratio < Ratio::new(4, 3));
    }

    #[test]
    fn scalar_instantiations_agree((n, m) in coprime_pair()) {
        let small = CharPair::<i64>::new(n, m).unwrap();
        prop_assume!(!small.is_cusp());
        let big = CharPair::<Int>::new(Int::from(n), Int::from(m)).unwrap();
        prop_assert_eq!(Int::from(delorme_q(&small).unwrap().0), delorme_q(&big).unwrap().0);
    }

    #[test]
    fn sigma_route_invariants(n in 2i64..150, m in 2i64..150) {
        let pair = WeightPair::<i64>::new(n, m).unwrap();
        let provider = BaseCaseProvider::<i64>::new(DelormeTier::Enabled);
        let lb = prop2_lower_bound(&pair).unwrap();
        if let Ok((tau, trace)) = tau_min_sqh(&pair, &provider) {
            prop_assert!(trace.sigma >= 0);
            prop_assert!(lb <= Ratio::from_integer(tau));
            prop_assert!(Ratio::new(pair.mu(), tau) < Ratio::new(4, 3));
            prop_assert!(trace.steps.iter().all(|s| s.product_decreases() != Some(false)));
            // symmetric in its arguments
            prop_assert_eq!(sigma(&m, &n, &provider).unwrap().sigma, trace.sigma);
        }
    }

    #[test]
    fn decimal_is_within_half_ulp(num in 1i64..1_000_000_000, den in 1i64..1_000_000_000) {
        let r = Rational::new(Int::from(num), Int::from(den));
        let text = decimal(&r, 15);
        let (int_part, frac_part) = text.split_once('.').unwrap();
        prop_assert_eq!(frac_part.len(), 15);
        let digits: Int = format!("{int_part}{frac_part}").parse().unwrap();
        let back = Rational::new(digits, Int::from(10).pow(15));
        let half_ulp = Rational::new(Int::from(1), Int::from(2) * Int::from(10).pow(15));
        let diff = if back > r { &back - &r } else { &r - &back };
        prop_assert!(diff <= half_ulp);
    }
}

#[test]
fn four_thirds_is_exact() {
    assert_eq!(four_thirds(), Rational::new(Int::from(4), Int::from(3)));
}
