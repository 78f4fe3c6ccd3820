//! Law of the local time at the origin, `xi(0, n)`, from the first-return law.

use super::returns::{first_return_law, ReturnLaw};
use crate::error::{Error, Result};

/// Horizon limit for the convolution route.
pub const RENEWAL_MAX_N: usize = 1000;

/// pmf of `xi(0, n)` for the simple walk on `Z^d`.
pub fn renewal_xi_law(d: usize, n: usize) -> Result<Vec<f64>> {
    let law = first_return_law(d, n.max(2))?;
    renewal_xi_law_from(&law, n)
}

/// `P(xi(0,n) >= m)` is the `m`-fold convolution of `f` summed up to `n`.
pub fn renewal_xi_law_from(law: &ReturnLaw, n: usize) -> Result<Vec<f64>> {
    if n > RENEWAL_MAX_N {
        return Err(Error::Usage(format!(
            "renewal convolution limited to n <= {RENEWAL_MAX_N}"
        )));
    }
    if n > law.n_max() {
        return Err(Error::Usage(
            "first-return law too short for requested n".into(),
        ));
    }
    let f = &law.f[..=n];
    let mut at_least = vec![1.0];
    let mut conv = f.to_vec();
    loop {
        let tail: f64 = conv.iter().sum();
        if tail < 1e-18 || at_least.len() > n {
            break;
        }
        at_least.push(tail);
        let mut next = vec![0.0; n + 1];
        for (i, &a) in conv.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in f[..=n - i].iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        conv = next;
    }
    at_least.push(0.0);
    Ok(at_least
        .windows(2)
        .map(|w| (w[0] - w[1]).max(0.0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::escape::green_total;

    #[test]
    fn four_steps_in_the_plane() {
        let pmf = renewal_xi_law(2, 4).unwrap();
        let expect = [43.0 / 64.0, 17.0 / 64.0, 4.0 / 64.0];
        assert_eq!(pmf.len(), 3);
        for (a, b) in pmf.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn one_step_never_returns() {
        for d in 1..=4 {
            assert_eq!(renewal_xi_law(d, 1).unwrap(), vec![1.0]);
        }
    }

    #[test]
    fn approaches_geometric_in_three_dimensions() {
        let gamma = 1.0 / green_total(3).unwrap();
        let pmf = renewal_xi_law(3, 1000).unwrap();
        // finite-horizon deficit is of order n^{-1/2}
        for (k, p) in pmf.iter().take(6).enumerate() {
            let geo = gamma * (1.0 - gamma).powi(k as i32);
            assert!((p - geo).abs() < 0.02, "k = {k}: {p} vs {geo}");
        }
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_mass() {
        let pmf = renewal_xi_law(1, 200).unwrap();
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(pmf.len() <= 101);
        assert!(renewal_xi_law(1, 5000).is_err());
    }
}
