//! JSON file formats for points and surfaces. Rationals are `"p/q"` strings.
//!
//! ```json
//! {"dim": 3, "points": [["0", "1", "-1"], ["1/2", "0", "3"]]}
//! {"spheres": [{"center": ["0", "0", "0"], "radius_sq": "1"}], "polys": ["1 * x1"]}
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::rational::serde_rational;
use crate::poly::{MultiPoly, Point, Rational};
use crate::surface::Surface;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointsFile {
    pub dim: usize,
    pub points: Vec<Point>,
}

impl PointsFile {
    pub fn new(points: Vec<Point>) -> Self {
        let dim = points.first().map(Point::dim).unwrap_or(3);
        PointsFile { dim, points }
    }

    pub fn validate(self) -> Result<Vec<Point>> {
        for (i, p) in self.points.iter().enumerate() {
            if p.dim() != self.dim {
                return Err(Error::InvalidInput(format!(
                    "point {i} has {} coordinates, expected {}",
                    p.dim(),
                    self.dim
                )));
            }
        }
        Ok(self.points)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereEntry {
    pub center: Point,
    #[serde(with = "serde_rational")]
    pub radius_sq: Rational,
}

/// Spheres and general surfaces. Reading yields the spheres first.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SurfacesFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spheres: Vec<SphereEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polys: Vec<MultiPoly>,
}

impl SurfacesFile {
    pub fn new(surfaces: &[Surface]) -> Self {
        let mut f = SurfacesFile::default();
        for s in surfaces {
            match s {
                Surface::Sphere { center, radius_sq } => f.spheres.push(SphereEntry {
                    center: center.clone(),
                    radius_sq: radius_sq.clone(),
                }),
                Surface::General { poly } => f.polys.push(poly.clone()),
            }
        }
        f
    }

    pub fn into_surfaces(self) -> Result<Vec<Surface>> {
        let mut out = Vec::with_capacity(self.spheres.len() + self.polys.len());
        for s in self.spheres {
            out.push(Surface::sphere(s.center, s.radius_sq)?);
        }
        for p in self.polys {
            out.push(Surface::general(p)?);
        }
        Ok(out)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_points(path: &Path) -> Result<Vec<Point>> {
    read_json::<PointsFile>(path)?.validate()
}

pub fn read_surfaces(path: &Path) -> Result<Vec<Surface>> {
    read_json::<SurfacesFile>(path)?.into_surfaces()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, ratio};

    #[test]
    fn points_round_trip() {
        let pts = vec![Point::new(vec![int(0), ratio(1, 2), int(-3)])];
        let text = serde_json::to_string(&PointsFile::new(pts.clone())).unwrap();
        assert_eq!(text, r#"{"dim":3,"points":[["0","1/2","-3"]]}"#);
        let back: PointsFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.validate().unwrap(), pts);
    }

    #[test]
    fn surfaces_file_format() {
        let text = r#"{"spheres":[{"center":["0","0","0"],"radius_sq":"1"}],"polys":["x1^2 - x2"]}"#;
        let f: SurfacesFile = serde_json::from_str(text).unwrap();
        let s = f.into_surfaces().unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0], Surface::unit_sphere(Point::origin(3)));
        assert_eq!(s[1].degree(), 2);
        let again = serde_json::to_string(&SurfacesFile::new(&s)).unwrap();
        let g: SurfacesFile = serde_json::from_str(&again).unwrap();
        assert_eq!(g.into_surfaces().unwrap(), s);
    }

    #[test]
    fn bad_inputs() {
        let f: PointsFile = serde_json::from_str(r#"{"dim":3,"points":[["1","2"]]}"#).unwrap();
        assert!(f.validate().is_err());
        let s: SurfacesFile =
            serde_json::from_str(r#"{"spheres":[{"center":["0","0","0"],"radius_sq":"-1"}]}"#).unwrap();
        assert!(s.into_surfaces().is_err());
        assert!(serde_json::from_str::<PointsFile>(r#"{"dim":3,"points":[["x"]]}"#).is_err());
    }
}
