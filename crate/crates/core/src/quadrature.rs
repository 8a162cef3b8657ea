//! Composite Simpson rule on uniformly spaced samples.

use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// Integrates uniformly spaced samples with the composite Simpson rule.
///
/// The sample count must be odd (an even number of panels) and at least 3.
pub fn simpson<T>(samples: &[T], step: f64) -> Result<T>
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = samples.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: format!("Simpson rule needs an odd sample count >= 3, got {n}"),
        });
    }
    let mut odd = T::default();
    let mut even = T::default();
    for (k, &v) in samples.iter().enumerate().take(n - 1).skip(1) {
        if k % 2 == 1 {
            odd = odd + v;
        } else {
            even = even + v;
        }
    }
    let total = samples[0] + samples[n - 1] + odd * 4.0 + even * 2.0;
    Ok(total * (step / 3.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    #[test]
    fn exact_for_cubics() {
        let n = 11;
        let h = 0.3;
        let xs: Vec<f64> = (0..n).map(|k| k as f64 * h).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x.powi(3) - x * x + 4.0).collect();
        let b = xs[n - 1];
        let exact = 0.5 * b.powi(4) - b.powi(3) / 3.0 + 4.0 * b;
        assert!((simpson(&ys, h).unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn converges_fourth_order_on_complex_exponential() {
        // integral of e^{ix} over [0, 1] = (e^i - 1)/i
        let exact = (C64::new(0.0, 1.0).exp() - 1.0) / C64::new(0.0, 1.0);
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let ys: Vec<C64> = (0..n).map(|k| C64::new(0.0, k as f64 * h).exp()).collect();
            (simpson(&ys, h).unwrap() - exact).norm()
        };
        let ratio = err(21) / err(41);
        assert!((ratio - 16.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn rejects_even_counts() {
        assert!(simpson(&[1.0, 2.0], 0.1).is_err());
        assert!(simpson(&[1.0, 2.0, 3.0, 4.0], 0.1).is_err());
    }
}
