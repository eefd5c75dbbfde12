use apery_core::closed_form::{r1, r2, s_k_closed};
use apery_core::exact::{binomial, stirling2_row};
use apery_core::series::s_k_series;
use apery_core::{BigInt, BigRational, HPReal, Precision};
use proptest::prelude::*;

fn z_in_range() -> impl Strategy<Value = BigRational> {
    // rationals strictly inside (0, 4)
    (1i64..400, 1i64..100).prop_filter_map("z in (0,4)", |(a, b)| {
        let z = BigRational::new(BigInt::from(a), BigInt::from(b));
        (z < BigRational::from_integer(4.into())).then_some(z)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn k_zero_parts(z in z_in_range()) {
        let four = BigRational::from_integer(4.into());
        prop_assert_eq!(r1(&z, 0).unwrap(), &z / (&four - &z));
        prop_assert_eq!(r2(&z, 0).unwrap(), &four / (&four - &z));
    }

    #[test]
    fn closed_matches_series(z in z_in_range(), k in 0u32..6) {
        // stay where the series converges in a reasonable number of terms
        prop_assume!(z <= BigRational::new(7.into(), 2.into()));
        let p = Precision::new(160).unwrap();
        let c = s_k_closed(&z, k, p).unwrap();
        let eps = c.abs().mul_pow2(-150);
        let s = s_k_series(&z, k as i64, p, &eps).unwrap();
        let d = (&c - &s.value).abs();
        prop_assert!(d <= eps.mul_pow2(1), "z={} k={} diff={}", z, k, d.to_sci_string(5));
    }

    #[test]
    fn stirling_pascal_rule(k in 1u32..40) {
        let prev = stirling2_row(k - 1);
        let row = stirling2_row(k);
        for j in 1..=k as usize {
            let up = if j <= k as usize - 1 { prev[j].clone() } else { BigInt::from(0) };
            prop_assert_eq!(&row[j], &(BigInt::from(j) * up + &prev[j - 1]));
        }
    }

    #[test]
    fn binomial_symmetry(n in 0u64..200, m in 0i64..200) {
        prop_assume!(m as u64 <= n);
        prop_assert_eq!(binomial(n, m), binomial(n, n as i64 - m));
    }
}

#[test]
fn negative_z_series_alternates_below_closed_magnitude() {
    let p = Precision::new(128).unwrap();
    let z = BigRational::from_integer((-2).into());
    let eps = HPReal::parse("1e-30", 128).unwrap();
    let s = s_k_series(&z, 1, p, &eps).unwrap();
    let bound = s_k_closed(&BigRational::from_integer(2.into()), 1, p).unwrap();
    assert!(s.value.abs() < bound);
}
