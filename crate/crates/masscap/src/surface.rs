//! Coordinate slices and their surface functionals.

use crate::error::Result;
use crate::profile::{Profile, WarpData};

const PI16: f64 = 16.0 * std::f64::consts::PI;

/// A coordinate sphere/slice of a profile, with its warped-gauge data.
#[derive(Debug, Clone)]
pub struct SurfaceSlice {
    pub profile: Profile,
    pub coord: f64,
    data: WarpData,
    sigma_area: f64,
}

impl SurfaceSlice {
    pub fn new(profile: &Profile, coord: f64) -> Result<SurfaceSlice> {
        let data = profile.warp_at(coord)?;
        Ok(SurfaceSlice {
            profile: profile.clone(),
            coord,
            data,
            sigma_area: profile.sigma_area(),
        })
    }

    pub fn warp_data(&self) -> WarpData {
        self.data
    }

    /// Area |Sigma|_sigma a^2.
    pub fn area(&self) -> f64 {
        self.sigma_area * self.data.a * self.data.a
    }

    /// Area radius (A / 4 pi)^{1/2}.
    pub fn area_radius(&self) -> f64 {
        (self.area() / (4.0 * std::f64::consts::PI)).sqrt()
    }

    /// Mean curvature 2 a'/a, normal pointing toward the asymptotically flat
    /// end (so a increasing toward infinity gives H > 0).
    pub fn mean_curvature(&self) -> f64 {
        2.0 * self.data.a1 / self.data.a
    }

    /// Willmore energy W = H^2 A = 4 a'^2 |Sigma|_sigma.
    pub fn willmore(&self) -> f64 {
        4.0 * self.data.a1 * self.data.a1 * self.sigma_area
    }

    /// Hawking mass (r_Sigma / 2)(1 - W / 16 pi).
    pub fn hawking_mass(&self) -> f64 {
        0.5 * self.area_radius() * (1.0 - self.willmore() / PI16)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn flat_unit_sphere() {
        let p = Profile::flat();
        let s = SurfaceSlice::new(&p, 1.0).unwrap();
        assert!((s.mean_curvature() - 2.0).abs() < 1e-15);
        assert!((s.willmore() - 16.0 * PI).abs() < 1e-12);
        assert!(s.hawking_mass().abs() < 1e-15);
        assert!((s.area() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn schwarzschild_slices() {
        let p = Profile::schwarzschild(1.0);
        // H(r=4) = 2 sqrt(1/2) / 4
        let s = SurfaceSlice::new(&p, 4.0).unwrap();
        let expect = 2.0 * (0.5f64).sqrt() / 4.0;
        assert!((s.mean_curvature() - expect).abs() < 1e-15);
        // horizon: minimal surface
        let h = SurfaceSlice::new(&p, 2.0).unwrap();
        assert_eq!(h.mean_curvature(), 0.0);
        assert_eq!(h.willmore(), 0.0);
        assert!((h.hawking_mass() - 1.0).abs() < 1e-15);
        // Hawking mass of any slice equals m
        let s3 = SurfaceSlice::new(&p, 3.0).unwrap();
        assert!((s3.hawking_mass() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn horn_mean_curvature() {
        // a = r^0.8 at r = 0.5: H = 2 * 0.8 / 0.5 = 3.2
        let p = Profile::horn_capped(0.8).unwrap();
        let s = SurfaceSlice::new(&p, 0.5).unwrap();
        assert!((s.mean_curvature() - 3.2).abs() < 1e-12);
    }

    #[test]
    fn negative_mass_willmore_closed_form() {
        // W = 16 pi (1 + 2m/r); at m=1, r=2 that is 32 pi
        let p = Profile::neg_schwarzschild(1.0);
        let s = SurfaceSlice::new(&p, 2.0).unwrap();
        assert!((s.willmore() - 32.0 * PI).abs() < 1e-11);
        assert!((s.hawking_mass() + 1.0).abs() < 1e-13);
        let s4 = SurfaceSlice::new(&p, 4.0).unwrap();
        assert!((s4.hawking_mass() + 1.0).abs() < 1e-13);
    }

    #[test]
    fn hawking_mass_equals_mass_profile_exactly() {
        let p = Profile::tanh_mass(1.0, 1.0, 2.2).unwrap();
        for r in [2.2, 3.0, 5.0, 9.0] {
            let s = SurfaceSlice::new(&p, r).unwrap();
            assert!((s.hawking_mass() - r.tanh()).abs() < 1e-12, "r = {r}");
        }
    }
}
