//! Ramanujan's `τ` and the Hecke traces on level-one cusp forms of small weight.

use std::sync::OnceLock;

use rug::Integer;

use crate::error::{Error, Result};

/// Default number of `τ` values computed by [`tau`].
pub const DEFAULT_TAU_PRECISION: u64 = 100_000;

/// Coefficients `τ(1..=N)` of `Δ = q ∏_{n>=1} (1 - q^n)^24`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaExpansion {
    /// `coeffs[i] = τ(i + 1)`.
    coeffs: Vec<i128>,
}

impl DeltaExpansion {
    /// Expands `Δ` to `N` terms via Jacobi's identity
    /// `∏(1 - q^n)^3 = Σ_{m>=0} (-1)^m (2m+1) q^{m(m+1)/2}`, raising the
    /// sparse cube to the eighth power.
    pub fn new(precision: u64) -> Result<Self> {
        let len = precision as usize;
        let mut sparse: Vec<(usize, i128)> = Vec::new();
        for m in 0usize.. {
            let e = m * (m + 1) / 2;
            if e >= len {
                break;
            }
            let c = (2 * m + 1) as i128;
            sparse.push((e, if m % 2 == 0 { c } else { -c }));
        }
        let mut acc = vec![0i128; len];
        for &(e, c) in &sparse {
            acc[e] = c;
        }
        for _ in 1..8 {
            let mut next = vec![0i128; len];
            for &(e, c) in &sparse {
                for (i, &a) in acc[..len - e].iter().enumerate() {
                    if a != 0 {
                        let t = a.checked_mul(c).ok_or(Error::Overflow("Delta expansion"))?;
                        next[i + e] = next[i + e].checked_add(t).ok_or(Error::Overflow("Delta expansion"))?;
                    }
                }
            }
            acc = next;
        }
        Ok(DeltaExpansion { coeffs: acc })
    }

    pub fn precision(&self) -> u64 {
        self.coeffs.len() as u64
    }

    pub fn tau(&self, m: u64) -> Result<Integer> {
        if m == 0 || m > self.precision() {
            return Err(Error::PrecisionExceeded { index: m, precision: self.precision() });
        }
        Ok(Integer::from(self.coeffs[m as usize - 1]))
    }
}

fn default_expansion() -> &'static DeltaExpansion {
    static DELTA: OnceLock<DeltaExpansion> = OnceLock::new();
    DELTA.get_or_init(|| DeltaExpansion::new(DEFAULT_TAU_PRECISION).expect("default expansion fits in i128"))
}

/// `τ(m)` for `1 <= m <= 10^5`, from a shared expansion computed on first use.
pub fn tau(m: u64) -> Result<Integer> {
    if m == 0 || m > DEFAULT_TAU_PRECISION {
        return Err(Error::PrecisionExceeded { index: m, precision: DEFAULT_TAU_PRECISION });
    }
    if m <= SMALL_TAU.len() as u64 {
        return Ok(Integer::from(SMALL_TAU[m as usize - 1]));
    }
    default_expansion().tau(m)
}

/// `τ(1..=12)`, so small cases do not pay for the full expansion.
const SMALL_TAU: [i64; 12] = [
    1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944,
];

/// Dimension of the level-one cusp forms of weight `k`, for even `2 <= k <= 14`.
pub fn cusp_form_dimension(weight: u32) -> Result<usize> {
    match weight {
        2 | 4 | 6 | 8 | 10 | 14 => Ok(0),
        12 => Ok(1),
        _ => Err(Error::UnsupportedWeight(weight)),
    }
}

/// Trace of `T_p` on the weight-`k` cusp forms of level one, for `k <= 14`.
/// The space is zero for `k <= 10` and `k = 14`, and spanned by `Δ` for `k = 12`.
pub fn hecke_trace(weight: u32, p: u64) -> Result<Integer> {
    if cusp_form_dimension(weight)? == 0 {
        return Ok(Integer::new());
    }
    tau(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct expansion of `∏(1 - q^n)^24`, one factor at a time.
    fn delta_by_product(len: usize) -> Vec<Integer> {
        let mut poly = vec![Integer::new(); len];
        poly[0] = Integer::from(1);
        for n in 1..len {
            for _ in 0..24 {
                for i in (n..len).rev() {
                    let t = Integer::from(&poly[i - n]);
                    poly[i] -= t;
                }
            }
        }
        poly
    }

    #[test]
    fn small_values() {
        assert_eq!(tau(1).unwrap(), 1);
        assert_eq!(tau(3).unwrap(), 252);
        assert_eq!(tau(5).unwrap(), 4830);
        assert_eq!(tau(7).unwrap(), -16744);
        assert_eq!(tau(6).unwrap(), tau(2).unwrap() * tau(3).unwrap());
    }

    #[test]
    fn jacobi_route_matches_product() {
        let n = 400;
        let fast = DeltaExpansion::new(n as u64).unwrap();
        let slow = delta_by_product(n);
        for m in 1..=n as u64 {
            assert_eq!(fast.tau(m).unwrap(), slow[m as usize - 1], "m = {m}");
        }
        for m in 1..=12 {
            assert_eq!(fast.tau(m).unwrap(), SMALL_TAU[m as usize - 1]);
        }
    }

    #[test]
    fn precision_errors() {
        let e = DeltaExpansion::new(10).unwrap();
        assert_eq!(e.tau(11), Err(Error::PrecisionExceeded { index: 11, precision: 10 }));
        assert!(tau(0).is_err());
        assert!(tau(DEFAULT_TAU_PRECISION + 1).is_err());
    }

    #[test]
    fn hecke_traces() {
        assert_eq!(hecke_trace(10, 5).unwrap(), 0);
        assert_eq!(hecke_trace(14, 7).unwrap(), 0);
        assert_eq!(hecke_trace(12, 5).unwrap(), 4830);
        assert_eq!(hecke_trace(16, 5), Err(Error::UnsupportedWeight(16)));
        assert_eq!(hecke_trace(3, 5), Err(Error::UnsupportedWeight(3)));
    }
}
