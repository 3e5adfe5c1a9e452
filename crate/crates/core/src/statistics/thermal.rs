use crate::defaults::C2_CM_K;

/// Mean Bose-Einstein occupation of a vibration at `nu` cm^-1 and
/// `temperature` K. Zero at T = 0.
pub fn bose_einstein(nu: f64, temperature: f64) -> f64 {
    debug_assert!(nu > 0.0 && temperature >= 0.0);
    if temperature == 0.0 {
        return 0.0;
    }
    1.0 / (C2_CM_K * nu / temperature).exp_m1()
}

/// Thermal anti-Stokes/Stokes ratio `n / (n + 1)`, which equals the
/// Boltzmann factor `exp(-c2 nu / T)`.
pub fn anti_stokes_ratio(nu: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    (-C2_CM_K * nu / temperature).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_temperature() {
        assert_eq!(bose_einstein(1640.0, 0.0), 0.0);
        assert_eq!(anti_stokes_ratio(1640.0, 0.0), 0.0);
    }

    #[test]
    fn reference_values() {
        // 1 / (exp(1.4388 * 1640 / 295) - 1) evaluated by hand
        let n = bose_einstein(1640.0, 295.0);
        assert!((n - 3.35994e-4).abs() / 3.35994e-4 < 1e-4, "{n}");
        let n = bose_einstein(100.0, 295.0);
        assert!((n - 1.59080).abs() < 1e-4, "{n}");
    }

    #[test]
    fn ratio_is_n_over_n_plus_one() {
        for &(nu, t) in &[(100.0, 295.0), (1640.0, 295.0), (3400.0, 77.0)] {
            let n = bose_einstein(nu, t);
            let r = anti_stokes_ratio(nu, t);
            assert!((r - n / (n + 1.0)).abs() <= 1e-14 * r.max(1e-300), "{nu} {t}");
        }
    }
}
