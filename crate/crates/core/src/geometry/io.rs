//! JSON domain files.
//!
//! ```json
//! {"type": "polygon", "angles": [0.0, 2.0, 4.0]}
//! {"type": "polygon", "vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1]]}
//! {"type": "disk"}
//! {"type": "rings", "rings": [{"start": 0, "step": 0.1, "count": 5}], "closures": [0.6]}
//! ```
//! Unknown top-level fields are ignored, so files may carry extra metadata.

use serde::{Deserialize, Serialize};

use super::{ConvexDomain, Ring, Vec2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DomainFile {
    Polygon {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        angles: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<Vec<[f64; 2]>>,
    },
    Disk,
    Rings {
        rings: Vec<Ring<f64>>,
        #[serde(default)]
        closures: Vec<f64>,
    },
}

impl DomainFile {
    pub fn from_domain(d: &ConvexDomain<f64>) -> Self {
        match d {
            ConvexDomain::Polygon(p) if p.is_inscribed() => DomainFile::Polygon { angles: Some(p.polar_angles().to_vec()), vertices: None },
            ConvexDomain::Polygon(p) => DomainFile::Polygon { angles: None, vertices: Some(p.vertices().iter().map(|v| [v.x, v.y]).collect()) },
            ConvexDomain::Rings(r) => DomainFile::Rings { rings: r.rings().to_vec(), closures: r.closures().to_vec() },
            ConvexDomain::UnitDisk => DomainFile::Disk,
        }
    }

    pub fn into_domain(self) -> Result<ConvexDomain<f64>> {
        match self {
            DomainFile::Polygon { angles: Some(a), vertices: None } => ConvexDomain::from_angles(a),
            DomainFile::Polygon { angles: None, vertices: Some(v) } => {
                ConvexDomain::from_vertices(v.into_iter().map(|[x, y]| Vec2::new(x, y)).collect())
            }
            DomainFile::Polygon { .. } => Err(Error::Parse("polygon needs exactly one of \"angles\" or \"vertices\"".into())),
            DomainFile::Disk => Ok(ConvexDomain::UnitDisk),
            DomainFile::Rings { rings, closures } => ConvexDomain::from_rings(rings, closures),
        }
    }
}

pub fn to_json(d: &ConvexDomain<f64>) -> String {
    serde_json::to_string(&DomainFile::from_domain(d)).expect("domain serializes")
}

/// JSON value of the domain, for embedding in larger documents.
pub fn to_value(d: &ConvexDomain<f64>) -> serde_json::Value {
    serde_json::to_value(DomainFile::from_domain(d)).expect("domain serializes")
}

pub fn from_json(s: &str) -> Result<ConvexDomain<f64>> {
    let f: DomainFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    f.into_domain()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_form_round_trips_bit_exactly() {
        let angles: Vec<f64> = (0..64).map(|k| (k as f64 + 0.1f64.sqrt()) * std::f64::consts::TAU / 64.5).collect();
        let d = ConvexDomain::from_angles(angles.clone()).unwrap();
        let back = from_json(&to_json(&d)).unwrap();
        match back {
            ConvexDomain::Polygon(p) => {
                assert!(p.polar_angles().iter().zip(&angles).all(|(a, b)| a.to_bits() == b.to_bits()))
            }
            _ => panic!("wrong variant"),
        }
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!(from_json(r#"{"type":"disk"}"#).unwrap(), ConvexDomain::UnitDisk);
        let sq = from_json(r#"{"type":"polygon","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]],"report":{}}"#).unwrap();
        assert_eq!(sq.vertex_count(), 4);
        let r = from_json(r#"{"type":"rings","rings":[{"start":0.0,"step":0.5,"count":2}],"closures":[1.5]}"#).unwrap();
        assert_eq!(r.vertex_count(), 8);
        assert!(from_json(r#"{"type":"polygon"}"#).is_err());
        assert!(from_json(r#"{"type":"blob"}"#).is_err());
    }
}
