//! JSON form of a domain spec.
//!
//! ```json
//! {"n": 2, "kind": "projective_image", "class": "cconvex", "bounding_radius": 10.0,
//!  "base": {"n": 2, "kind": "polydisc", "class": "convex", "bounding_radius": 1.5},
//!  "map": {"matrix": [[1,0],[0,0],[0,0],[1,0]], "offset": [[0,0],[0,0]],
//!          "denominator": [[2,0],[-1,0],[0,0]]}}
//! ```
//!
//! Complex numbers are `[re, im]` pairs. `matrix` is row-major, either flat
//! (`n*n` pairs) or nested by rows. `denominator` lists `d0, d1, ..., dn` for
//! the affine form `d0 + d1 z1 + ... + dn zn`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ConvexityClass, DomainKind, DomainSpec, ProjectiveMap, DEFAULT_BOUNDING_RADIUS};
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, CVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpecJson {
    pub n: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<DomainSpecJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    pub class: ConvexityClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounding_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub matrix: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<Vec<Complex64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Flat(Vec<Complex64>),
    Rows(Vec<Vec<Complex64>>),
}

impl MatrixJson {
    fn to_matrix(&self, n: usize) -> Result<CMatrix> {
        match self {
            MatrixJson::Flat(v) => {
                if v.len() != n * n {
                    return Err(Error::Parse(format!("flat matrix needs {} entries, got {}", n * n, v.len())));
                }
                CMatrix::from_rows(v.chunks(n).map(|r| r.to_vec()).collect())
            }
            MatrixJson::Rows(rows) => {
                let m = CMatrix::from_rows(rows.clone())?;
                if m.dim() != n {
                    return Err(Error::Parse(format!("matrix is {}x{0}, expected {n}x{n}", m.dim())));
                }
                Ok(m)
            }
        }
    }
}

fn flat(m: &CMatrix) -> MatrixJson {
    MatrixJson::Flat(m.rows().into_iter().flatten().collect())
}

impl DomainSpecJson {
    pub fn into_spec(self) -> Result<DomainSpec> {
        let n = self.n;
        let need_map = |m: &Option<MapJson>| m.clone().ok_or_else(|| Error::Parse(format!("`{}` needs `map`", self.kind)));
        let need_base = |b: &Option<Box<DomainSpecJson>>| -> Result<DomainSpec> {
            let b = b.clone().ok_or_else(|| Error::Parse(format!("`{}` needs `base`", self.kind)))?;
            if b.n != n {
                return Err(Error::Parse(format!("base dimension {} differs from n = {n}", b.n)));
            }
            b.into_spec()
        };
        let spec = match self.kind.as_str() {
            "ball" => DomainSpec::ball(n)?,
            "polydisc" => DomainSpec::polydisc(n)?,
            "l1ball" => DomainSpec::l1ball(n)?,
            "lp_ball" => DomainSpec::lp_ball(n, self.p.ok_or_else(|| Error::Parse("`lp_ball` needs `p`".into()))?)?,
            "affine_image" => {
                let map = need_map(&self.map)?;
                let offset = CVector::new(map.offset.unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); n]));
                DomainSpec::affine_image(need_base(&self.base)?, map.matrix.to_matrix(n)?, offset)?
            }
            "projective_image" => {
                let map = need_map(&self.map)?;
                let offset = CVector::new(map.offset.unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); n]));
                let den = map.denominator.ok_or_else(|| Error::Parse("`projective_image` needs `map.denominator`".into()))?;
                if den.len() != n + 1 {
                    return Err(Error::Parse(format!("denominator needs {} entries (d0..dn), got {}", n + 1, den.len())));
                }
                let pm = ProjectiveMap::new(map.matrix.to_matrix(n)?, offset, den[0], CVector::new(den[1..].to_vec()))?;
                DomainSpec::projective_image(need_base(&self.base)?, pm)?
            }
            "defining_function" => {
                let rho = self.rho.as_deref().ok_or_else(|| Error::Parse("`defining_function` needs `rho`".into()))?;
                DomainSpec::defining_function(n, rho, self.class, self.bounding_radius.unwrap_or(DEFAULT_BOUNDING_RADIUS))?
            }
            other => return Err(Error::Parse(format!("unknown kind `{other}`"))),
        };
        let spec = spec.with_class(self.class)?;
        match self.bounding_radius {
            Some(r) => spec.with_bounding_radius(r),
            None => Ok(spec),
        }
    }
}

impl DomainSpec {
    pub fn from_json(text: &str) -> Result<DomainSpec> {
        let raw: DomainSpecJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_spec()
    }

    pub fn to_json_value(&self) -> DomainSpecJson {
        let mut out = DomainSpecJson {
            n: self.n,
            kind: self.kind.name().to_string(),
            p: None,
            base: None,
            map: None,
            rho: None,
            class: self.class,
            bounding_radius: Some(self.bounding_radius),
        };
        match &self.kind {
            DomainKind::LpBall { p } => out.p = Some(*p),
            DomainKind::AffineImage { base, map } => {
                out.base = Some(Box::new(base.to_json_value()));
                out.map = Some(MapJson { matrix: flat(&map.matrix), offset: Some(map.offset.clone().into_inner()), denominator: None });
            }
            DomainKind::ProjectiveImage { base, map } => {
                out.base = Some(Box::new(base.to_json_value()));
                let mut den = vec![map.denom_const];
                den.extend(map.denom_linear.iter().copied());
                out.map = Some(MapJson {
                    matrix: flat(&map.matrix),
                    offset: Some(map.offset.clone().into_inner()),
                    denominator: Some(den),
                });
            }
            DomainKind::DefiningFunction { source, .. } => out.rho = Some(source.clone()),
            _ => {}
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }
}
