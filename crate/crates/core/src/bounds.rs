//! Closed-form f-vector inequalities in exact integer arithmetic.
//!
//! Everything here is generic over [`ExactInt`], implemented for the
//! primitive signed integers and for [`num_bigint::BigInt`]. Square roots are
//! integer square roots with a perfect-square test, so ceilings of
//! expressions like `(a + √D) / 2` are exact.

use std::fmt::{Debug, Display};

use num_integer::{Integer, Roots};
use num_traits::Signed;
use serde_json::{json, Value};
use thiserror::Error;

pub trait ExactInt: Integer + Signed + Roots + Clone + From<i64> + Debug + Display {}

impl<T: Integer + Signed + Roots + Clone + From<i64> + Debug + Display> ExactInt for T {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("need f_-1..f_{need} ({} values), got {got}", need + 2)]
    InsufficientF { need: i64, got: usize },
}

fn int<T: ExactInt>(x: i64) -> T {
    T::from(x)
}

/// `C(n, m)`, zero outside `0 ≤ m ≤ n`.
pub fn binomial<T: ExactInt>(n: &T, m: &T) -> T {
    if m.is_negative() || n.is_negative() || m > n {
        return T::zero();
    }
    let m = if m.clone() + m.clone() > *n { n.clone() - m.clone() } else { m.clone() };
    let mut acc = T::one();
    let mut i = T::zero();
    while i < m {
        acc = acc * (n.clone() - i.clone()) / (i.clone() + T::one());
        i = i + T::one();
    }
    acc
}

/// `⌈(a + √D) / 2⌉` for `D ≥ 0`.
pub fn ceil_half_sqrt<T: ExactInt>(a: &T, disc: &T) -> T {
    let s = disc.sqrt();
    let two = int::<T>(2);
    if s.clone() * s.clone() == *disc {
        (a.clone() + s + T::one()).div_floor(&two)
    } else {
        (a.clone() + s).div_floor(&two) + T::one()
    }
}

/// Whether `D` is a perfect square (the "regular" cases of the square-root bounds).
pub fn is_perfect_square<T: ExactInt>(disc: &T) -> bool {
    !disc.is_negative() && {
        let s = disc.sqrt();
        s.clone() * s == *disc
    }
}

/// Least `f_0` allowed by `f_0 ≥ ⌈½(2d + 3 + √(1 + 4(d+1)(d+2)β_1))⌉`.
pub fn tight_neighborly_bound<T: ExactInt>(d: &T, beta1: &T) -> Result<T, BoundsError> {
    if *d < int(3) || beta1.is_negative() {
        return Err(BoundsError::Domain(format!("need d >= 3 and beta1 >= 0, got d={d}, beta1={beta1}")));
    }
    let a = int::<T>(2) * d.clone() + int(3);
    let disc = T::one() + int::<T>(4) * (d.clone() + T::one()) * (d.clone() + int(2)) * beta1.clone();
    Ok(ceil_half_sqrt(&a, &disc))
}

/// Outcome of `C(f_0 − d − 1, 2) ≥ C(d + 2, 2)·β_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
    pub equality: bool,
}

pub fn binomial_form_check<T: ExactInt>(f0: &T, d: &T, beta1: &T) -> Result<BinomialCheck<T>, BoundsError> {
    if *f0 < d.clone() + T::one() {
        return Err(BoundsError::Domain(format!("need f0 >= d+1, got f0={f0}, d={d}")));
    }
    let two = int::<T>(2);
    let lhs = binomial(&(f0.clone() - d.clone() - T::one()), &two);
    let rhs = binomial(&(d.clone() + two.clone()), &two) * beta1.clone();
    Ok(BinomialCheck { holds: lhs >= rhs, equality: lhs == rhs, lhs, rhs })
}

/// `f_0 ≥ ⌈½(7 + √(49 − 24χ))⌉` for surfaces.
pub fn heawood_bound<T: ExactInt>(chi: &T) -> Result<T, BoundsError> {
    let disc = int::<T>(49) - int::<T>(24) * chi.clone();
    if disc.is_negative() {
        return Err(BoundsError::Domain(format!("49 - 24*chi < 0 for chi={chi}")));
    }
    Ok(ceil_half_sqrt(&int(7), &disc))
}

/// Lower bound for `f_j` of a triangulated `d`-sphere from the generalized
/// lower bound inequalities, given `partial_f = (f_{−1}, f_0, …, f_{k−1})`
/// with `f_{−1} = 1`. Equality for every `j` characterizes `k`-stacked
/// spheres (conditionally on the conjecture).
///
/// In the branch `d − k + 1 ≤ j ≤ d` the inner sum runs over
/// `l = d − j, …, k − 1`.
pub fn glbc_bound<T: ExactInt>(d: &T, k: &T, j: &T, partial_f: &[T]) -> Result<T, BoundsError> {
    let one = T::one();
    if *d < int::<T>(2) * k.clone() + one.clone() || k.is_negative() {
        return Err(BoundsError::Domain(format!("need d >= 2k+1, got d={d}, k={k}")));
    }
    if j < k || j > d {
        return Err(BoundsError::Domain(format!("need k <= j <= d, got j={j}")));
    }
    let need = k.to_string().parse::<i64>().map_err(|_| BoundsError::Domain("k too large".into()))?;
    if partial_f.len() < need as usize + 1 {
        return Err(BoundsError::InsufficientF { need: need - 1, got: partial_f.len() });
    }
    let lower_branch = *j <= d.clone() - k.clone();
    let sign = |e: &T| if e.is_even() { T::one() } else { -T::one() };
    let mut total = T::zero();
    let mut i = -one.clone();
    for f_i in &partial_f[..need as usize + 1] {
        let mut coeff = binomial(&(j.clone() - i.clone() - one.clone()), &(j.clone() - k.clone()))
            * binomial(&(d.clone() - i.clone() + one.clone()), &(j.clone() - i.clone()));
        if !lower_branch {
            coeff = coeff
                - binomial(k, &(d.clone() - j.clone() + one.clone()))
                    * binomial(&(d.clone() - i.clone()), &(d.clone() - k.clone() + one.clone()));
            let mut l = d.clone() - j.clone();
            while l < *k {
                coeff = coeff
                    + sign(&(k.clone() - l.clone()))
                        * binomial(&l, &(d.clone() - j.clone()))
                        * binomial(&(d.clone() - i.clone()), &(d.clone() - l.clone() + one.clone()));
                l = l + one.clone();
            }
        }
        total = total + sign(&(k.clone() - i.clone() + one.clone())) * coeff * f_i.clone();
        i = i + one.clone();
    }
    Ok(total)
}

/// `28χ − 21 f_0 + 6 f_1`, or `28χ + 3 f_0 (f_0 − 8)` for 2-neighborly
/// 6-manifolds (where `f_1 = C(f_0, 2)`).
pub fn six_manifold_bound<T: ExactInt>(chi: &T, f0: &T, f1: Option<&T>, two_neighborly: bool) -> Result<T, BoundsError> {
    let base = int::<T>(28) * chi.clone();
    if two_neighborly {
        return Ok(base + int::<T>(3) * f0.clone() * (f0.clone() - int(8)));
    }
    let f1 = f1.ok_or_else(|| BoundsError::Domain("f1 required unless two_neighborly".into()))?;
    Ok(base - int::<T>(21) * f0.clone() + int::<T>(6) * f1.clone())
}

/// `35 f_0 − 15 f_1 + 5 f_2 − f_3 − 35χ`, zero for closed 6-manifolds.
pub fn dehn_sommerville6_residual<T: ExactInt>(f: &[T], chi: &T) -> Result<T, BoundsError> {
    if f.len() < 4 {
        return Err(BoundsError::InsufficientF { need: 3, got: f.len() + 1 });
    }
    Ok(int::<T>(35) * f[0].clone() - int::<T>(15) * f[1].clone() + int::<T>(5) * f[2].clone()
        - f[3].clone()
        - int::<T>(35) * chi.clone())
}

/// An evaluated inequality `actual ≥ bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport<T> {
    pub name: String,
    pub inputs: Vec<(String, String)>,
    pub bound: T,
    pub actual: Option<T>,
    pub note: Option<String>,
}

impl<T: ExactInt> BoundsReport<T> {
    pub fn new(name: &str, inputs: Vec<(&str, String)>, bound: T) -> Self {
        BoundsReport {
            name: name.to_string(),
            inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            bound,
            actual: None,
            note: None,
        }
    }

    pub fn with_actual(mut self, actual: T) -> Self {
        self.actual = Some(actual);
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    /// `actual − bound`.
    pub fn slack(&self) -> Option<T> {
        self.actual.clone().map(|a| a - self.bound.clone())
    }

    pub fn equality(&self) -> Option<bool> {
        self.slack().map(|s| s.is_zero())
    }

    /// JSON object; integers that fit in `i64` are numbers, larger ones strings.
    pub fn to_json(&self) -> Value {
        let num = |x: &T| {
            let s = x.to_string();
            s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
        };
        let inputs: serde_json::Map<String, Value> = self
            .inputs
            .iter()
            .map(|(k, v)| (k.clone(), v.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::String(v.clone()))))
            .collect();
        json!({
            "name": self.name,
            "inputs": inputs,
            "bound": num(&self.bound),
            "actual": self.actual.as_ref().map(num),
            "slack": self.slack().as_ref().map(num),
            "equality": self.equality(),
            "note": self.note,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn table_rows() {
        for (d, b, n) in [(3, 1, 9), (4, 3, 15), (13, 2, 35), (5, 5, 21), (10, 8, 44)] {
            assert_eq!(tight_neighborly_bound(&d, &b).unwrap(), n);
            assert_eq!(tight_neighborly_bound(&big(d), &big(b)).unwrap(), big(n));
        }
        assert_eq!(tight_neighborly_bound(&3i64, &0).unwrap(), 5);
        assert!(tight_neighborly_bound(&2i64, &1).is_err());
    }

    #[test]
    fn heawood_values() {
        assert_eq!(heawood_bound(&2i64).unwrap(), 4);
        assert_eq!(heawood_bound(&0i64).unwrap(), 7);
        assert_eq!(heawood_bound(&-2i64).unwrap(), 9);
        assert!(heawood_bound(&3i64).is_err());
    }

    #[test]
    fn binomial_forms() {
        let c = binomial_form_check(&15i64, &4, &3).unwrap();
        assert!(c.holds && c.equality);
        assert_eq!((c.lhs, c.rhs), (45, 45));
        assert!(binomial_form_check(&9i64, &3, &1).unwrap().equality);
        let c = binomial_form_check(&10i64, &3, &1).unwrap();
        assert!(c.holds && !c.equality);
        assert!(binomial_form_check(&3i64, &3, &1).is_err());
    }

    #[test]
    fn six_manifold_values() {
        assert_eq!(six_manifold_bound(&4i64, &14, None, true).unwrap(), 364);
        assert_eq!(six_manifold_bound(&4i64, &16, Some(&112), false).unwrap(), 448);
        assert_eq!(six_manifold_bound(&2i64, &8, Some(&28), false).unwrap(), 56);
        assert!(six_manifold_bound(&2i64, &8, None, false).is_err());
        assert_eq!(dehn_sommerville6_residual(&[16i64, 112, 448, 980], &4).unwrap(), 0);
        assert_eq!(dehn_sommerville6_residual(&[8i64, 28, 56, 70], &2).unwrap(), 0);
        assert_eq!(dehn_sommerville6_residual(&[16i64, 112, 448, 981], &4).unwrap(), -1);
    }

    #[test]
    fn glbc_values() {
        assert_eq!(glbc_bound(&5i64, &2, &2, &[1, 7, 21]).unwrap(), 35);
        for (f0, f1) in [(9i64, 30i64), (12, 50)] {
            assert_eq!(glbc_bound(&5i64, &2, &2, &[1, f0, f1]).unwrap(), 35 - 15 * f0 + 5 * f1);
        }
        for n in 5..20i64 {
            assert_eq!(glbc_bound(&3i64, &1, &1, &[1, n]).unwrap(), 4 * n - 10);
        }
        assert!(glbc_bound(&4i64, &2, &2, &[1, 7, 21]).is_err());
        assert!(glbc_bound(&5i64, &2, &1, &[1, 7, 21]).is_err());
        assert!(matches!(glbc_bound(&5i64, &2, &2, &[1, 7]), Err(BoundsError::InsufficientF { .. })));
    }

    #[test]
    fn report_json() {
        let r = BoundsReport::new("six", vec![("chi", "4".into())], 448i64).with_actual(448);
        assert_eq!(r.equality(), Some(true));
        let v = r.to_json();
        assert_eq!(v["bound"], 448);
        assert_eq!(v["slack"], 0);
        assert_eq!(v["inputs"]["chi"], 4);
    }

    /// f-vector of a d-sphere whose h-vector is constant on k..=d+1-k and
    /// symmetric: the face numbers of a k-stacked sphere.
    fn plateau_f(d: i64, k: i64, head: &[i64]) -> Vec<i64> {
        let mut h = vec![0i64; d as usize + 2];
        h[..=k as usize].copy_from_slice(&head[..=k as usize]);
        for i in k..=d + 1 - k {
            h[i as usize] = head[k as usize];
        }
        for i in d + 2 - k..=d + 1 {
            h[i as usize] = h[(d + 1 - i) as usize];
        }
        // f_{j-1} = sum_i C(d+1-i, j-i) h_i, j = 0..=d+1
        (0..=d + 1)
            .map(|j| (0..=j).map(|i| binomial(&(d + 1 - i), &(j - i)) * h[i as usize]).sum())
            .collect()
    }

    #[test]
    fn glbc_matches_plateau_oracle() {
        for (d, k) in [(5i64, 2i64), (6, 2), (7, 3), (3, 1), (4, 1), (9, 4)] {
            for seed in 0..5i64 {
                let head: Vec<i64> = (0..=k).map(|i| if i == 0 { 1 } else { d + 2 + 3 * i + seed * (i + 1) }).collect();
                let f = plateau_f(d, k, &head);
                for j in k..=d {
                    let bound = glbc_bound(&d, &k, &j, &f[..=k as usize]).unwrap();
                    assert_eq!(bound, f[j as usize + 1], "d={d} k={k} j={j}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn bound_is_least_binomial_solution(d in 3i64..=15, beta1 in 1i64..=50) {
            let bound = tight_neighborly_bound(&d, &beta1).unwrap();
            let least = (d + 1..).find(|f0| binomial_form_check(f0, &d, &beta1).unwrap().holds).unwrap();
            prop_assert_eq!(bound, least);
        }

        #[test]
        fn heawood_matches_halved_beta(beta1 in 0i64..200) {
            // surfaces: chi = 2 - beta1 over GF(2)
            let disc = 1 + 24 * beta1;
            prop_assert_eq!(heawood_bound(&(2 - beta1)).unwrap(), ceil_half_sqrt(&7, &disc));
        }

        #[test]
        fn generic_and_big_agree(d in 3i64..40, beta1 in 0i64..1000) {
            prop_assert_eq!(big(tight_neighborly_bound(&d, &beta1).unwrap()), tight_neighborly_bound(&big(d), &big(beta1)).unwrap());
        }
    }
}
