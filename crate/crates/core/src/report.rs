//! Serializable records for every analysis, with 1-based ray, cone and wall
//! numbers, and their plain-text rendering.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cohomology::{cech_report, CechReport, DEFAULT_REGION_CAP};
use crate::error::Result;
use crate::exactlin::vector_text;
use crate::format::RationalText;
use crate::parliament::{global_sections, parliament, ParliamentPolytope, SectionsTable};
use crate::positivity::{analyze, restrict_all, CurveSplitting, PositivityReport};
use crate::{QBundle, Rational};

fn exact(v: &[Rational]) -> Vec<RationalText> {
    v.iter().cloned().map(RationalText).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolytopeRecord {
    pub vector: Vec<RationalText>,
    pub bounds: Vec<i64>,
    pub vertices: Vec<Vec<RationalText>>,
    pub lattice_points: Vec<Vec<i64>>,
    pub empty: bool,
}

impl From<&ParliamentPolytope> for PolytopeRecord {
    fn from(p: &ParliamentPolytope) -> Self {
        Self {
            vector: exact(&p.vector),
            bounds: p.polytope.bounds.clone(),
            vertices: p.polytope.vertices.iter().map(|v| exact(v)).collect(),
            lattice_points: p.polytope.lattice_points.clone(),
            empty: p.is_empty(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingRecord {
    pub cone: usize,
    pub rays: Vec<usize>,
    pub entries: Vec<SplittingPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingPair {
    pub character: Vec<i64>,
    pub vector: Vec<RationalText>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionRecord {
    pub wall: usize,
    pub rays: Vec<usize>,
    pub left_cone: usize,
    pub right_cone: usize,
    pub v0: Vec<i64>,
    pub degrees: Vec<i64>,
    pub pairs: Vec<PairRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub u: Vec<i64>,
    pub u_prime: Vec<i64>,
    pub degree: i64,
}

impl RestrictionRecord {
    pub fn new(wall: usize, s: &CurveSplitting) -> Self {
        Self {
            wall,
            rays: s.wall.ray_indices.iter().map(|i| i + 1).collect(),
            left_cone: s.wall.left_cone + 1,
            right_cone: s.wall.right_cone + 1,
            v0: s.v0.clone(),
            degrees: s.degrees(),
            pairs: s.pairs.iter().map(|p| PairRecord { u: p.u.clone(), u_prime: p.u_prime.clone(), degree: p.degree }).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyEntry {
    pub character: Vec<i64>,
    pub h: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologySummary {
    pub nonzero: Vec<CohomologyEntry>,
    pub totals: Vec<usize>,
    pub euler: String,
}

impl CohomologySummary {
    pub fn new(report: &CechReport, d: usize) -> Self {
        Self {
            nonzero: report.nonzero.iter().map(|(u, h)| CohomologyEntry { character: u.clone(), h: h.clone() }).collect(),
            totals: (0..=d).map(|i| report.total(i)).collect(),
            euler: report.euler.to_string(),
        }
    }
}

/// A member `V` of the intersection lattice with the ground vectors in `R_V`,
/// keyed by their normalized text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatRecord {
    pub dim: usize,
    pub basis: Vec<Vec<RationalText>>,
    pub vectors: Vec<String>,
}

/// Everything the tool computes about one bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub lattice_rank: usize,
    pub rank: usize,
    pub ground_set: Vec<String>,
    pub flats: Vec<FlatRecord>,
    pub sections: SectionsTable,
    pub parliament: Vec<PolytopeRecord>,
    pub splittings: Vec<SplittingRecord>,
    pub positivity: PositivityReport,
    pub restrictions: Vec<RestrictionRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologySummary>,
}

fn vector_key(v: &[Rational]) -> String {
    vector_text(&exact(v))
}

pub fn ground_set_records(bundle: &QBundle) -> (Vec<String>, Vec<FlatRecord>) {
    let ground = bundle.ground_set();
    let keys: Vec<String> = ground.vectors().iter().map(|v| vector_key(v)).collect();
    let flats = bundle
        .lattice()
        .members()
        .iter()
        .zip(ground.flats())
        .map(|(m, flat)| FlatRecord {
            dim: m.dim(),
            basis: m.basis().iter().map(|v| exact(v)).collect(),
            vectors: flat.iter().map(|&g| keys[g].clone()).collect(),
        })
        .collect();
    (keys, flats)
}

pub fn parliament_records(bundle: &QBundle) -> Result<Vec<PolytopeRecord>> {
    Ok(parliament(bundle)?.iter().map(PolytopeRecord::from).collect())
}

pub fn splitting_records(bundle: &QBundle) -> Vec<SplittingRecord> {
    bundle
        .splittings()
        .iter()
        .map(|s| SplittingRecord {
            cone: s.cone + 1,
            rays: bundle.fan().cone(s.cone).iter().map(|i| i + 1).collect(),
            entries: s.entries.iter().map(|e| SplittingPair { character: e.character.clone(), vector: exact(&e.vector) }).collect(),
        })
        .collect()
}

pub fn restriction_records(bundle: &QBundle) -> Result<Vec<RestrictionRecord>> {
    Ok(restrict_all(bundle)?.iter().enumerate().map(|(n, s)| RestrictionRecord::new(n + 1, s)).collect())
}

impl Report {
    pub fn build(bundle: &QBundle, name: Option<String>, jets: &[i64], with_cohomology: bool) -> Result<Self> {
        let members = parliament(bundle)?;
        let cohomology = if with_cohomology {
            Some(CohomologySummary::new(&cech_report(bundle, DEFAULT_REGION_CAP)?, bundle.fan().dim()))
        } else {
            None
        };
        let (ground_set, flats) = ground_set_records(bundle);
        Ok(Self {
            name,
            lattice_rank: bundle.fan().dim(),
            rank: bundle.rank(),
            ground_set,
            flats,
            sections: global_sections(bundle, &members),
            parliament: members.iter().map(PolytopeRecord::from).collect(),
            splittings: splitting_records(bundle),
            positivity: analyze(bundle, jets)?,
            restrictions: restriction_records(bundle)?,
            cohomology,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "{name}");
        }
        let _ = writeln!(out, "rank {} bundle on a {}-dimensional toric variety", self.rank, self.lattice_rank);
        out.push_str(&flats_text(&self.ground_set, &self.flats));
        out.push_str(&splittings_text(&self.splittings));
        out.push_str(&parliament_text(&self.parliament));
        out.push_str(&sections_text(&self.sections));
        out.push_str(&positivity_text(&self.positivity));
        out.push_str(&restrictions_text(&self.restrictions));
        if let Some(c) = &self.cohomology {
            out.push_str(&cohomology_text(c));
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn flats_text(ground_set: &[String], flats: &[FlatRecord]) -> String {
    let mut out = format!("ground set: {}\n", ground_set.join(", "));
    for f in flats {
        let basis: Vec<String> = f.basis.iter().map(|v| vector_text(v)).collect();
        let span = if basis.is_empty() { "0".to_string() } else { format!("<{}>", basis.join(", ")) };
        let members = if f.vectors.is_empty() { "none".to_string() } else { f.vectors.join(", ") };
        let _ = writeln!(out, "  flat of {span} (dim {}): {members}", f.dim);
    }
    out
}

pub fn splittings_text(records: &[SplittingRecord]) -> String {
    let mut out = String::from("splittings\n");
    for s in records {
        let pairs: Vec<String> =
            s.entries.iter().map(|e| format!("({}, {})", vector_text(&e.character), vector_text(&e.vector))).collect();
        let _ = writeln!(out, "  cone {} {}: {}", s.cone, vector_text(&s.rays), pairs.join(", "));
    }
    out
}

pub fn parliament_text(records: &[PolytopeRecord]) -> String {
    let mut out = String::from("parliament\n");
    for p in records {
        let body = if p.empty {
            "empty".to_string()
        } else {
            let vs: Vec<String> = p.vertices.iter().map(|v| vector_text(v)).collect();
            let n = p.lattice_points.len();
            format!("conv{{{}}}, {n} lattice point{}", vs.join(", "), if n == 1 { "" } else { "s" })
        };
        let _ = writeln!(out, "  P{} bounds {}: {body}", vector_text(&p.vector), vector_text(&p.bounds));
    }
    out
}

pub fn sections_text(table: &SectionsTable) -> String {
    let mut out = format!("global sections: h0 = {}\n", table.total);
    for e in &table.entries {
        let _ = writeln!(out, "  {} dim {}", vector_text(&e.character), e.dim);
    }
    out
}

pub fn positivity_text(p: &PositivityReport) -> String {
    let mut out = String::from("positivity\n");
    let _ = writeln!(out, "  globally generated: {}", yes_no(p.globally_generated));
    for (k, v) in &p.jets {
        let _ = writeln!(out, "  separates {k}-jets: {}", yes_no(*v));
    }
    let _ = writeln!(out, "  very ample: {}", yes_no(p.very_ample));
    let _ = writeln!(out, "  ample: {}", yes_no(p.ample));
    let _ = writeln!(out, "  nef: {}", yes_no(p.nef));
    for w in &p.witnesses {
        let _ = writeln!(out, "  witness: cone {} at {} (order {}): {}", w.cone, vector_text(&w.character), w.order, w.detail);
    }
    out
}

pub fn restrictions_text(records: &[RestrictionRecord]) -> String {
    let mut out = String::from("curve restrictions\n");
    for r in records {
        let summands: Vec<String> = r.degrees.iter().map(|a| format!("O({a})")).collect();
        let _ = writeln!(out, "  wall {} rays {}: {}", r.wall, vector_text(&r.rays), summands.join(" + "));
        for p in &r.pairs {
            let _ = writeln!(out, "    {} ~ {} degree {}", vector_text(&p.u), vector_text(&p.u_prime), p.degree);
        }
    }
    out
}

pub fn cohomology_text(c: &CohomologySummary) -> String {
    let mut out = String::from("cohomology\n");
    for e in &c.nonzero {
        let _ = writeln!(out, "  {} h = {}", vector_text(&e.character), vector_text(&e.h));
    }
    let _ = writeln!(out, "  totals {}", vector_text(&c.totals));
    let _ = writeln!(out, "  euler characteristic: {}", c.euler);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn reports_are_deterministic() {
        let g = examples::bundle_g();
        let a = Report::build(&g, Some("G".into()), &[1], true).unwrap().to_json();
        let b = Report::build(&g, Some("G".into()), &[1], true).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"globally_generated\": true"));
        let r = Report::build(&g, None, &[1], false).unwrap();
        assert_eq!(r.ground_set.len(), 3);
        assert!(r.flats.iter().all(|f| f.vectors.len() >= f.dim));
    }

    #[test]
    fn restriction_records_are_one_based() {
        let records = restriction_records(&examples::bundle_g()).unwrap();
        assert_eq!(records.iter().map(|r| r.wall).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert_eq!(records[0].rays, vec![1]);
        assert_eq!(records[3].degrees, vec![8, 1]);
    }

    #[test]
    fn text_mentions_every_section() {
        let t = Report::build(&examples::bundle_h(), None, &[0], false).unwrap().to_text();
        for heading in ["splittings", "parliament", "global sections", "positivity", "curve restrictions"] {
            assert!(t.contains(heading), "{heading}");
        }
        assert!(t.contains("very ample: no"));
    }
}
