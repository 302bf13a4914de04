//! JSON and OFF serialization, plus the building-set file loader.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rat, rat_to_f64};
use crate::face_poset::FacePoset;
use crate::flats::{BuildingKind, BuildingSet, FlatsError};
use crate::halfspaces::HalfSpaceKind;
use crate::polytope::{Permutonestohedron, PolytopeError};
use crate::root_system::RootSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("malformed building-set JSON: {0}")]
    Json(String),
    #[error("{0:?} is not a root of the given root system")]
    UnknownRoot(Vec<i64>),
    #[error("root index {index} out of range for a list of {len} roots")]
    RootIndex { index: usize, len: usize },
    #[error("OFF export needs rank 3, got rank {0}")]
    NotRankThree(usize),
    #[error(transparent)]
    Flats(#[from] FlatsError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingFile {
    /// Roots in simple-root coordinates; sign is ignored.
    pub roots: Vec<Vec<i64>>,
    /// Each flat as indices into `roots`.
    pub flats: Vec<Vec<usize>>,
}

pub fn parse_building_json(rs: &RootSystem, text: &str, cap: usize) -> Result<BuildingSet, ExportError> {
    let file: BuildingFile = serde_json::from_str(text).map_err(|e| ExportError::Json(e.to_string()))?;
    building_from_file(rs, &file, cap)
}

pub fn building_from_file(rs: &RootSystem, file: &BuildingFile, cap: usize) -> Result<BuildingSet, ExportError> {
    let n = rs.rank();
    let mut index = Vec::with_capacity(file.roots.len());
    for r in &file.roots {
        if r.len() != n {
            return Err(ExportError::UnknownRoot(r.clone()));
        }
        let (i, _) = rs.signed_root_index(r).ok_or_else(|| ExportError::UnknownRoot(r.clone()))?;
        index.push(i);
    }
    let mut lists = Vec::with_capacity(file.flats.len());
    for f in &file.flats {
        let mut l = Vec::with_capacity(f.len());
        for &k in f {
            l.push(*index.get(k).ok_or(ExportError::RootIndex { index: k, len: index.len() })?);
        }
        l.sort_unstable();
        l.dedup();
        lists.push(l);
    }
    Ok(BuildingSet::from_root_lists(rs, &lists, cap)?)
}

/// Writes a building set in the loader's format, using the positive roots in order.
pub fn building_to_file(rs: &RootSystem, g: &BuildingSet) -> BuildingFile {
    BuildingFile { roots: rs.positive_roots().to_vec(), flats: g.flats().iter().map(|f| f.root_indices()).collect() }
}

pub fn building_name(kind: BuildingKind) -> &'static str {
    match kind {
        BuildingKind::Minimal => "minimal",
        BuildingKind::Maximal => "maximal",
        BuildingKind::Interval => "interval",
        BuildingKind::Custom => "custom",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HalfSpaceJson {
    pub normal: Vec<String>,
    pub covector: Vec<String>,
    pub offset: String,
    pub kind: HalfSpaceKind,
    pub flat: Vec<usize>,
    pub sigma_id: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexJson {
    pub point: Vec<String>,
    pub sigma_id: usize,
    pub nested: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolytopeJson {
    pub root_system: String,
    pub rank: usize,
    pub building: String,
    /// Points and normals are in simple-root coordinates; `(x, y) = x^T gram y`.
    pub gram: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    pub weyl_order: usize,
    pub a: String,
    pub epsilons: Vec<String>,
    pub epsilons_generated: bool,
    pub halfspaces: Vec<HalfSpaceJson>,
    pub vertices: Vec<VertexJson>,
}

pub fn polytope_json(p: &Permutonestohedron) -> PolytopeJson {
    let halfspaces = p
        .halfspaces
        .iter()
        .map(|h| HalfSpaceJson {
            normal: h.normal.to_strings(),
            covector: h.covector.to_strings(),
            offset: format_rat(&h.offset),
            kind: h.kind.clone(),
            flat: h.flat.root_indices(),
            sigma_id: h.sigma,
        })
        .collect();
    let vertices = p
        .vertices
        .iter()
        .map(|v| VertexJson {
            point: v.point.to_strings(),
            sigma_id: v.sigma,
            nested: p.maximal[v.nested].flats(&p.g).iter().map(|f| f.root_indices()).collect(),
        })
        .collect();
    PolytopeJson {
        root_system: p.rs.label(),
        rank: p.rank(),
        building: building_name(p.g.kind()).to_string(),
        gram: p.rs.gram().to_vec(),
        positive_roots: p.rs.positive_roots().to_vec(),
        weyl_order: p.w.order(),
        a: format_rat(p.eps.a()),
        epsilons: p.eps.values().iter().map(format_rat).collect(),
        epsilons_generated: p.eps_generated,
        halfspaces,
        vertices,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceNodeJson {
    pub dim: usize,
    pub coset_rep_id: usize,
    pub flats: Vec<Vec<usize>>,
    pub labels: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FacePosetJson {
    pub root_system: String,
    pub building: String,
    pub f_vector: Vec<usize>,
    pub nodes: Vec<FaceNodeJson>,
    /// Covering pairs `[smaller, larger]`, absent when not computed.
    pub edges: Option<Vec<[usize; 2]>>,
}

pub fn face_poset_json(poset: &FacePoset, with_edges: bool) -> FacePosetJson {
    let p = poset.polytope();
    let fund = p.g.fund();
    let nodes = poset
        .faces()
        .iter()
        .enumerate()
        .map(|(i, f)| FaceNodeJson {
            dim: poset.dimension(i),
            coset_rep_id: f.coset,
            flats: f.labelled.nested.members().iter().map(|&m| fund[m].root_indices()).collect(),
            labels: f.labelled.labels.iter().map(|&m| fund[m].root_indices()).collect(),
        })
        .collect();
    let edges = with_edges.then(|| poset.covering_edges().into_iter().map(|(a, b)| [a, b]).collect());
    FacePosetJson {
        root_system: p.rs.label(),
        building: building_name(p.g.kind()).to_string(),
        f_vector: poset.f_vector(),
        nodes,
        edges,
    }
}

/// Upper-triangular `U` with `gram = U^T U`, so `U x` are Euclidean coordinates.
fn euclidean_frame(gram: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = gram.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][i] = (gram[i][i] as f64 - s).sqrt();
            } else {
                l[i][j] = (gram[i][j] as f64 - s) / l[j][j];
            }
        }
    }
    (0..n).map(|r| (0..n).map(|c| l[c][r]).collect()).collect()
}

fn apply(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

fn sub3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Decimal with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" { "0".into() } else { s }
}

/// Rank-3 mesh with facets wound counterclockwise seen from outside.
pub fn write_off(p: &Permutonestohedron, digits: usize) -> Result<String, ExportError> {
    if p.rank() != 3 {
        return Err(ExportError::NotRankThree(p.rank()));
    }
    let frame = euclidean_frame(p.rs.gram());
    let pts: Vec<Vec<f64>> = p
        .vertices
        .iter()
        .map(|v| apply(&frame, &v.point.coords().iter().map(rat_to_f64).collect::<Vec<_>>()))
        .collect();
    let facets = p.facet_vertex_sets()?;
    let mut polys = Vec::with_capacity(facets.len());
    for (h, vs) in facets.iter().enumerate() {
        let nf = apply(&frame, &p.halfspaces[h].normal.coords().iter().map(rat_to_f64).collect::<Vec<_>>());
        let normal = [nf[0], nf[1], nf[2]];
        let mut c = [0.0; 3];
        for &v in vs {
            for k in 0..3 {
                c[k] += pts[v][k] / vs.len() as f64;
            }
        }
        let u = sub3(&pts[vs[0]], &c);
        let w = cross3(&normal, &u);
        let mut order: Vec<(f64, usize)> = vs
            .iter()
            .map(|&v| {
                let d = sub3(&pts[v], &c);
                (dot3(&d, &w).atan2(dot3(&d, &u)), v)
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        polys.push(order.into_iter().map(|(_, v)| v).collect::<Vec<_>>());
    }
    let edges: usize = polys.iter().map(|f| f.len()).sum::<usize>() / 2;
    let mut out = String::new();
    out.push_str("OFF\n");
    let _ = writeln!(out, "# {} {} permutonestohedron", p.rs.label(), building_name(p.g.kind()));
    let _ = writeln!(
        out,
        "# lossy: exact rational vertices rounded to {digits} significant digits in an orthonormal frame"
    );
    let _ = writeln!(out, "{} {} {}", pts.len(), polys.len(), edges);
    for q in &pts {
        let cs: Vec<String> = q.iter().map(|&x| format_significant(x, digits)).collect();
        let _ = writeln!(out, "{}", cs.join(" "));
    }
    for f in &polys {
        let ids: Vec<String> = f.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{} {}", f.len(), ids.join(" "));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::face_poset::DEFAULT_FACE_CAP;
    use crate::flats::DEFAULT_FLAT_CAP;
    use crate::polytope::BuildOptions;

    fn a3_minimal() -> Permutonestohedron {
        let rs = RootSystem::from_spec_str("A3").unwrap();
        let g = BuildingSet::minimal(&rs, DEFAULT_FLAT_CAP).unwrap();
        Permutonestohedron::build(rs, g, &BuildOptions::default()).unwrap()
    }

    #[test]
    fn building_round_trip() {
        let rs = RootSystem::from_spec_str("A3").unwrap();
        let g = BuildingSet::minimal(&rs, DEFAULT_FLAT_CAP).unwrap();
        let text = serde_json::to_string(&building_to_file(&rs, &g)).unwrap();
        let back = parse_building_json(&rs, &text, DEFAULT_FLAT_CAP).unwrap();
        assert_eq!(back.flats(), g.flats());
    }

    #[test]
    fn building_loader_errors() {
        let rs = RootSystem::from_spec_str("A2").unwrap();
        assert!(matches!(parse_building_json(&rs, "{", DEFAULT_FLAT_CAP), Err(ExportError::Json(_))));
        let bad_root = r#"{"roots": [[1, 2]], "flats": [[0]]}"#;
        assert_eq!(parse_building_json(&rs, bad_root, DEFAULT_FLAT_CAP).unwrap_err(), ExportError::UnknownRoot(vec![1, 2]));
        let bad_index = r#"{"roots": [[1, 0]], "flats": [[3]]}"#;
        assert!(matches!(parse_building_json(&rs, bad_index, DEFAULT_FLAT_CAP), Err(ExportError::RootIndex { .. })));
        let no_v = r#"{"roots": [[1, 0], [0, 1], [-1, -1]], "flats": [[0], [1], [2]]}"#;
        assert!(matches!(parse_building_json(&rs, no_v, DEFAULT_FLAT_CAP), Err(ExportError::Flats(FlatsError::MissingV))));
        let ok = r#"{"roots": [[1, 0], [0, 1], [-1, -1]], "flats": [[0], [1], [2], [0, 1, 2]]}"#;
        assert_eq!(parse_building_json(&rs, ok, DEFAULT_FLAT_CAP).unwrap().flats().len(), 4);
    }

    #[test]
    fn polytope_json_shape() {
        let p = a3_minimal();
        let j = polytope_json(&p);
        assert_eq!(j.vertices.len(), 120);
        assert_eq!(j.halfspaces.len(), 74);
        let v = serde_json::to_value(&j).unwrap();
        assert!(v["halfspaces"][0]["offset"].is_string());
        assert!(v["halfspaces"][0]["kind"]["type"].is_string());
    }

    #[test]
    fn poset_json() {
        let rs = RootSystem::from_spec_str("A2").unwrap();
        let g = BuildingSet::minimal(&rs, DEFAULT_FLAT_CAP).unwrap();
        let p = Permutonestohedron::build(rs, g, &BuildOptions::default()).unwrap();
        let poset = FacePoset::enumerate(&p, DEFAULT_FACE_CAP).unwrap();
        let j = face_poset_json(&poset, true);
        assert_eq!(j.nodes.len(), 25);
        assert_eq!(j.edges.unwrap().len(), 12 * 2 + 12);
    }

    #[test]
    fn off_output() {
        let p = a3_minimal();
        let off = write_off(&p, 12).unwrap();
        let mut lines = off.lines().filter(|l| !l.starts_with('#'));
        assert_eq!(lines.next(), Some("OFF"));
        assert_eq!(lines.next(), Some("120 74 192"));
        let rs = RootSystem::from_spec_str("A2").unwrap();
        let g = BuildingSet::minimal(&rs, DEFAULT_FLAT_CAP).unwrap();
        let p2 = Permutonestohedron::build(rs, g, &BuildOptions::default()).unwrap();
        assert_eq!(write_off(&p2, 12).unwrap_err(), ExportError::NotRankThree(2));
    }

    #[test]
    fn off_faces_point_outward() {
        let off = write_off(&a3_minimal(), 12).unwrap();
        let mut lines = off.lines().filter(|l| !l.starts_with('#')).skip(1);
        let counts: Vec<usize> = lines.next().unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
        let pts: Vec<[f64; 3]> = (0..counts[0])
            .map(|_| {
                let c: Vec<f64> = lines.next().unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
                [c[0], c[1], c[2]]
            })
            .collect();
        let center = pts.iter().fold([0.0; 3], |acc, p| [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2]]);
        let center = center.map(|x| x / pts.len() as f64);
        for _ in 0..counts[1] {
            let ids: Vec<usize> = lines.next().unwrap().split(' ').skip(1).map(|x| x.parse().unwrap()).collect();
            let mut newell = [0.0; 3];
            let mut mid = [0.0; 3];
            for (k, &i) in ids.iter().enumerate() {
                let a = pts[i];
                let b = pts[ids[(k + 1) % ids.len()]];
                let c = cross3(&a, &b);
                for t in 0..3 {
                    newell[t] += c[t];
                    mid[t] += a[t] / ids.len() as f64;
                }
            }
            assert!(dot3(&newell, &sub3(&mid, &center)) > 0.0);
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_significant(-2.5, 12), "-2.5");
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(123.456, 4), "123.5");
    }
}
