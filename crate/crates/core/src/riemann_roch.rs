//! Euler characteristics on P³, line-bundle cohomology, the `h⁰` formulas
//! for ideals of points in a plane, and Ext-table consistency.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::ChernCharacter;
use crate::error::CohomologyError;
use crate::rational::{q, qi, Rational};

/// `χ(v) = ch3 + 2·ch2 + 11/6·ch1 + ch0`, integrating against `td(P³)`.
pub fn chi(v: &ChernCharacter) -> Rational {
    &v.ch3 + qi(2) * &v.ch2 + q(11, 6) * &v.ch1 + &v.ch0
}

/// `χ(v, w) = Σ (−1)ⁱ ext^i(v, w) = χ(v^∨ · w)`.
pub fn euler_pairing(v: &ChernCharacter, w: &ChernCharacter) -> Rational {
    chi(&v.dual().mul(w))
}

fn binomial(n: i64, k: u32) -> BigInt {
    if n < 0 || i64::from(k) > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::from(1), |acc, j| acc * BigInt::from(n - i64::from(j)) / BigInt::from(j + 1))
}

/// `hⁱ(Pⁿ, O(d))` by Bott's formula.
pub fn bott_h(n: u32, d: i64, i: u32) -> Result<BigInt, CohomologyError> {
    if n == 0 {
        return Err(CohomologyError::BadDimension(n));
    }
    if i > n {
        return Err(CohomologyError::BadDegree { n, i });
    }
    let n64 = i64::from(n);
    Ok(if i == 0 && d >= 0 {
        binomial(n64 + d, n)
    } else if i == n && d < -n64 {
        binomial(-d - 1, n)
    } else {
        BigInt::zero()
    })
}

/// `h⁰(P², I_Z(d))` for `k` general points, valid for `d ≥ 2k − 3`
/// (and `d ≥ 0` when `k = 1`): `(d+1)(d+2)/2 − k`.
pub fn ideal_points_h0(k: u32, d: i64) -> Result<i64, CohomologyError> {
    if k == 0 {
        return Err(CohomologyError::NoPoints);
    }
    let min_d = if k == 1 { 0 } else { 2 * i64::from(k) - 3 };
    if d < min_d {
        return Err(CohomologyError::OutsideDomain { k, d, min_d });
    }
    let d = i128::from(d);
    ((d + 1) * (d + 2) / 2 - i128::from(k))
        .to_i64()
        .ok_or(CohomologyError::Overflow)
}

/// `(h⁰(P², I_p(k)), h⁰(P², I_p²(k)))` for a point `p`, `k ≥ 1`.
pub fn fat_point_h0(k: i64) -> Result<(i64, i64), CohomologyError> {
    if k < 1 {
        return Err(CohomologyError::FatPointDegree(k));
    }
    let k = i128::from(k);
    let h = k * (k + 3) / 2;
    let h = h.to_i64().ok_or(CohomologyError::Overflow)?;
    Ok((h, h - 2))
}

/// Dimensions of `Ext^i(source, target)` for `i = 0..3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtTable {
    pub source_label: String,
    pub target_label: String,
    /// `[hom, ext1, ext2, ext3]`.
    pub dims: [u64; 4],
}

impl ExtTable {
    pub fn alternating_sum(&self) -> i128 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &x)| if i % 2 == 0 { i128::from(x) } else { -i128::from(x) })
            .sum()
    }
}

/// Whether `hom − ext1 + ext2 − ext3 = χ(source, target)`.
pub fn ext_table_consistent(t: &ExtTable, source: &ChernCharacter, target: &ChernCharacter) -> bool {
    euler_pairing(source, target) == Rational::from_integer(t.alternating_sum().into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(s: &str) -> ChernCharacter {
        s.parse().unwrap()
    }

    fn table(d: [u64; 4]) -> ExtTable {
        ExtTable {
            source_label: "x".into(),
            target_label: "y".into(),
            dims: d,
        }
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&ChernCharacter::line_bundle(0)), qi(1));
        assert_eq!(chi(&ChernCharacter::line_bundle(1)), qi(4));
        assert_eq!(chi(&ch("1,0,-5,11")), qi(2));
        for n in -10..=10i64 {
            assert_eq!(chi(&ChernCharacter::line_bundle(n)), q((n + 1) * (n + 2) * (n + 3), 6));
        }
    }

    #[test]
    fn pairing_examples() {
        let v = ch("1,0,-5,11");
        let b = ch("0,2,-7,37/3");
        let o2 = ChernCharacter::line_bundle(-2);
        assert_eq!(euler_pairing(&v, &v), qi(-19));
        assert_eq!(euler_pairing(&b, &o2), qi(-12));
        assert_eq!(euler_pairing(&o2, &b), qi(0));
        assert_eq!(euler_pairing(&b, &b), qi(-8));
        for n in -4..=4 {
            let l = ChernCharacter::line_bundle(n);
            assert_eq!(euler_pairing(&l, &l), qi(1));
        }
    }

    #[test]
    fn bott_examples() {
        assert_eq!(bott_h(3, 4, 0).unwrap(), BigInt::from(35));
        assert_eq!(bott_h(3, -4, 3).unwrap(), BigInt::from(1));
        for i in 0..=2 {
            assert!(bott_h(2, -1, i).unwrap().is_zero());
        }
        assert!(bott_h(3, 0, 4).is_err());
        assert!(bott_h(0, 0, 0).is_err());
        for d in -12..=12 {
            let alt: BigInt = (0..=3)
                .map(|i| {
                    let h = bott_h(3, d, i).unwrap();
                    if i % 2 == 0 { h } else { -h }
                })
                .sum();
            assert_eq!(Rational::from_integer(alt), chi(&ChernCharacter::line_bundle(d)));
        }
    }

    #[test]
    fn appendix_formulas() {
        assert_eq!(ideal_points_h0(4, 5), Ok(17));
        assert_eq!(ideal_points_h0(1, 4), Ok(14));
        assert_eq!(ideal_points_h0(5, 7), Ok(31));
        assert_eq!(
            ideal_points_h0(4, 4),
            Err(CohomologyError::OutsideDomain { k: 4, d: 4, min_d: 5 })
        );
        assert_eq!(ideal_points_h0(0, 4), Err(CohomologyError::NoPoints));
        assert_eq!(fat_point_h0(4), Ok((14, 12)));
        assert_eq!(fat_point_h0(5), Ok((20, 18)));
        assert_eq!(fat_point_h0(0), Err(CohomologyError::FatPointDegree(0)));
    }

    #[test]
    fn ext_tables() {
        let b = ch("0,2,-7,37/3");
        let o2 = ChernCharacter::line_bundle(-2);
        assert!(ext_table_consistent(&table([0, 12, 0, 0]), &b, &o2));
        assert!(ext_table_consistent(&table([0, 0, 0, 0]), &o2, &b));
        assert!(ext_table_consistent(&table([1, 9, 0, 0]), &b, &b));
        assert!(!ext_table_consistent(&table([0, 11, 0, 0]), &b, &o2));
    }
}
