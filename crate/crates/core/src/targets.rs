//! The three Calabi-Yau hypersurface targets and their derived constants.

use crate::error::{Error, Result};
use crate::rat::{rat_i64, Rat};
use num_traits::One;

#[derive(Clone, Debug, PartialEq)]
pub struct TargetConfig {
    /// weighted-projective weights, five entries summing to k
    pub weights: [u64; 5],
    pub k: u64,
    /// p_k = k / prod(a_i), the degree of H^4 on the ambient space
    pub p_k: Rat,
    /// r = k^k / prod(a_i^{a_i}), the inverse radius of convergence
    pub r: Rat,
    /// normalization constants of the genus 0 and 1 potentials
    pub a1k: Rat,
    pub a2k: Rat,
    /// the five ordinary exponents in [1, k]
    pub ordinary: Vec<u64>,
    /// quantum-connection band constants (c1, c2, c3)
    pub c_vec: [i64; 3],
}

fn narrow(m: u64, weights: &[u64; 5], k: u64) -> bool {
    weights.iter().all(|&a| !(m * a).is_multiple_of(k))
}

/// Populate everything for k in {6, 8, 10}. The ordinary set is computed
/// from its definition (narrow, or m = k) and asserted to have exactly five
/// members, matching the order-5 right factor of the Picard-Fuchs operator.
pub fn target_config(k: u32) -> Result<TargetConfig> {
    let (weights, a1k, a2k, c_vec): ([u64; 5], Rat, Rat, [i64; 3]) = match k {
        6 => (
            [1, 1, 1, 1, 2],
            Rat::new(1.into(), 2.into()),
            Rat::new((-7).into(), 4.into()),
            [360, 2772, 5400],
        ),
        8 => (
            [1, 1, 1, 1, 4],
            Rat::new(1.into(), 3.into()),
            Rat::new((-11).into(), 6.into()),
            [1680, 15808, 30560],
        ),
        10 => (
            [1, 1, 1, 2, 5],
            Rat::new(1.into(), 6.into()),
            Rat::new((-17).into(), 12.into()),
            [15120, 179520, 410720],
        ),
        other => return Err(Error::UnknownTarget(other)),
    };
    let k = k as u64;
    assert_eq!(weights.iter().sum::<u64>(), k, "Calabi-Yau condition");
    let prod_a: u64 = weights.iter().product();
    let p_k = rat_i64(k as i64) / rat_i64(prod_a as i64);
    let mut r = Rat::one();
    for _ in 0..k {
        r *= rat_i64(k as i64);
    }
    for &a in &weights {
        for _ in 0..a {
            r /= rat_i64(a as i64);
        }
    }
    let ordinary: Vec<u64> = (1..=k)
        .filter(|&m| m == k || narrow(m, &weights, k))
        .collect();
    assert_eq!(
        ordinary.len(),
        5,
        "ordinary set must have five members for k = {k}"
    );
    Ok(TargetConfig {
        weights,
        k,
        p_k,
        r,
        a1k,
        a2k,
        ordinary,
        c_vec,
    })
}

pub fn all_targets() -> Vec<TargetConfig> {
    [6, 8, 10]
        .iter()
        .map(|&k| target_config(k).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_frac;

    #[test]
    fn k6_constants() {
        let t = target_config(6).unwrap();
        assert_eq!(t.p_k, rat_i64(3));
        assert_eq!(t.r, rat_i64(11664));
        assert_eq!(t.a1k, rat_frac(1, 2));
        assert_eq!(t.a2k, rat_frac(-7, 4));
        assert_eq!(t.c_vec, [360, 2772, 5400]);
        assert_eq!(t.ordinary, vec![1, 2, 4, 5, 6]);
    }

    #[test]
    fn k8_k10_derived() {
        let t8 = target_config(8).unwrap();
        assert_eq!(t8.r, rat_i64(65536));
        assert_eq!(t8.ordinary, vec![1, 3, 5, 7, 8]);
        assert_eq!(t8.p_k, rat_i64(2));
        let t10 = target_config(10).unwrap();
        assert_eq!(t10.r, rat_i64(800000));
        assert_eq!(t10.ordinary, vec![1, 3, 7, 9, 10]);
        assert_eq!(t10.p_k, rat_i64(1));
    }

    #[test]
    fn normalization_consistency() {
        // 6 a1k = p_k, forced by the (log Q)^3 term of the genus-0 potential
        for t in all_targets() {
            assert_eq!(rat_i64(6) * &t.a1k, t.p_k, "k = {}", t.k);
            assert_eq!(t.ordinary.len(), 5);
        }
    }

    #[test]
    fn unknown_target_rejected() {
        assert!(matches!(target_config(5), Err(Error::UnknownTarget(5))));
    }
}
