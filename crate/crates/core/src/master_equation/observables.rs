use serde::{Deserialize, Serialize};

use super::density::DensityOperator;
use crate::error::{Error, Result};

/// Normally ordered photon moments of a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonMoments {
    pub mean_s: f64,
    pub mean_as: f64,
    /// `<n_S n_aS>`
    pub cross: f64,
    /// `<n_S (n_S - 1)>`
    pub auto_s: f64,
    /// `<n_aS (n_aS - 1)>`
    pub auto_as: f64,
}

impl PhotonMoments {
    pub fn of(rho: &DensityOperator) -> Self {
        let f = |s: usize| s as f64;
        Self {
            mean_s: rho.expect_diagonal(|s, _, _| f(s)),
            mean_as: rho.expect_diagonal(|_, a, _| f(a)),
            cross: rho.expect_diagonal(|s, a, _| f(s) * f(a)),
            auto_s: rho.expect_diagonal(|s, _, _| f(s) * (f(s) - 1.0)),
            auto_as: rho.expect_diagonal(|_, a, _| f(a) * (f(a) - 1.0)),
        }
    }
}

/// `<a_S† a_aS† a_aS a_S> / (<n_S><n_aS>)`.
pub fn g2_cross(rho: &DensityOperator) -> Result<f64> {
    let m = PhotonMoments::of(rho);
    if m.mean_s <= 0.0 || m.mean_as <= 0.0 {
        return Err(Error::Undefined(format!(
            "zero mean occupation (<n_S> = {:e}, <n_aS> = {:e})",
            m.mean_s, m.mean_as
        )));
    }
    Ok(m.cross / (m.mean_s * m.mean_as))
}

/// `(g2_SS, g2_aSaS)`.
pub fn g2_auto(rho: &DensityOperator) -> Result<(f64, f64)> {
    let m = PhotonMoments::of(rho);
    if m.mean_s <= 0.0 || m.mean_as <= 0.0 {
        return Err(Error::Undefined("zero mean occupation".into()));
    }
    Ok((m.auto_s / (m.mean_s * m.mean_s), m.auto_as / (m.mean_as * m.mean_as)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::master_equation::density::{single_mode_coherent, single_mode_fock, single_mode_thermal};
    use crate::master_equation::fock::C64;

    #[test]
    fn factorizing_states_have_unit_cross_correlation() {
        let l = 8;
        let vac = single_mode_fock(l, 0);
        let coherent = DensityOperator::product(
            &single_mode_coherent(l, C64::new(0.4, 0.2)),
            &single_mode_coherent(l, C64::new(-0.3, 0.0)),
            &vac,
        )
        .unwrap();
        assert!((g2_cross(&coherent).unwrap() - 1.0).abs() < 1e-12);
        let thermal =
            DensityOperator::product(&single_mode_thermal(l, 0.3), &single_mode_thermal(l, 0.1), &vac).unwrap();
        assert!((g2_cross(&thermal).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vacuum_is_undefined() {
        assert!(matches!(g2_cross(&DensityOperator::vacuum(2)), Err(Error::Undefined(_))));
    }
}
