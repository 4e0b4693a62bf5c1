//! The JSON bundle file: fan, rank and one filtration per ray.
//!
//! Rays and cones are 1-indexed. Span entries are integers or `"p/q"` text.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlin::Subspace;
use crate::fan::Fan;
use crate::klyachko::{Filtration, FiltrationStep, ToricBundle};
use crate::scalar::Field;
use crate::{QBundle, Rational};

/// An exact rational read from an integer or from `"p/q"` text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl FromStr for RationalText {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Rational as Field>::parse(s).map(Self).ok_or_else(|| format!("`{s}` is not a rational number p/q with q > 0"))
    }
}

impl fmt::Display for RationalText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match (self.0.denom().is_one(), self.0.numer().to_i64()) {
            (true, Some(n)) => serializer.serialize_i64(n),
            _ => serializer.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = RationalText;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RationalText, E> {
                Ok(RationalText(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RationalText, E> {
                Ok(RationalText(Rational::from_integer(v.into())))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RationalText, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepData {
    pub through: i64,
    pub span: Vec<Vec<RationalText>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationData {
    /// 1-based ray number.
    pub ray: usize,
    pub steps: Vec<StepData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleData {
    pub rank: usize,
    pub filtrations: Vec<FiltrationData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub lattice_rank: usize,
    pub rays: Vec<Vec<i64>>,
    /// 1-based ray numbers.
    pub max_cones: Vec<Vec<usize>>,
    pub bundle: BundleData,
}

impl BundleFile {
    /// Parse JSON text; structural errors carry the path of the offending field.
    pub fn parse(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { "$".to_string() } else { path };
            Error::input(path, e.into_inner().to_string())
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// The fan with 0-based indices, after checking shapes.
    pub fn fan(&self) -> Result<Fan> {
        let d = self.lattice_rank;
        if d == 0 {
            return Err(Error::input("lattice_rank", "must be positive"));
        }
        for (i, v) in self.rays.iter().enumerate() {
            if v.len() != d {
                return Err(Error::input(format!("rays[{i}]"), format!("expected {d} entries, found {}", v.len())));
            }
        }
        for (k, cone) in self.max_cones.iter().enumerate() {
            for (j, &ray) in cone.iter().enumerate() {
                if ray == 0 || ray > self.rays.len() {
                    return Err(Error::input(
                        format!("max_cones[{k}][{j}]"),
                        format!("ray number {ray} is outside 1..={}", self.rays.len()),
                    ));
                }
            }
        }
        Fan::from_one_indexed(d, self.rays.clone(), &self.max_cones)
    }

    /// Build and validate the bundle.
    pub fn to_bundle(&self) -> Result<QBundle> {
        let fan = self.fan()?;
        let r = self.bundle.rank;
        if r == 0 {
            return Err(Error::input("bundle.rank", "rank must be positive"));
        }
        let mut slots: Vec<Option<Filtration>> = vec![None; fan.num_rays()];
        for (k, data) in self.bundle.filtrations.iter().enumerate() {
            let at = format!("bundle.filtrations[{k}]");
            if data.ray == 0 || data.ray > fan.num_rays() {
                return Err(Error::input(format!("{at}.ray"), format!("ray number {} is outside 1..={}", data.ray, fan.num_rays())));
            }
            if slots[data.ray - 1].is_some() {
                return Err(Error::input(format!("{at}.ray"), format!("ray {} already has a filtration", data.ray)));
            }
            let mut steps = Vec::new();
            for (s, step) in data.steps.iter().enumerate() {
                let mut rows = Vec::new();
                for (t, row) in step.span.iter().enumerate() {
                    if row.len() != r {
                        return Err(Error::input(
                            format!("{at}.steps[{s}].span[{t}]"),
                            format!("expected {r} entries, found {}", row.len()),
                        ));
                    }
                    rows.push(row.iter().map(|x| x.0.clone()).collect::<Vec<Rational>>());
                }
                let span = Subspace::span(r, &rows).map_err(|e| Error::input(format!("{at}.steps[{s}].span"), e.to_string()))?;
                steps.push(FiltrationStep { through: step.through, span });
            }
            let filtration = Filtration::new(r, steps).map_err(|e| match e {
                Error::InvalidInput { path, message } => Error::input(format!("{at}.{path}"), message),
                other => other,
            })?;
            slots[data.ray - 1] = Some(filtration);
        }
        if let Some(missing) = slots.iter().position(Option::is_none) {
            return Err(Error::input("bundle.filtrations", format!("no filtration for ray {}", missing + 1)));
        }
        ToricBundle::new(fan, r, slots.into_iter().map(|f| f.expect("checked")).collect())
    }

    /// The file describing `bundle`, spans written by their canonical bases.
    pub fn from_bundle(bundle: &QBundle, name: Option<String>) -> Self {
        let fan = bundle.fan();
        let filtrations = bundle
            .filtrations()
            .iter()
            .enumerate()
            .map(|(i, f)| FiltrationData {
                ray: i + 1,
                steps: f
                    .steps()
                    .iter()
                    .map(|s| StepData {
                        through: s.through,
                        span: s.span.basis().iter().map(|row| row.iter().cloned().map(RationalText).collect()).collect(),
                    })
                    .collect(),
            })
            .collect();
        Self {
            name,
            lattice_rank: fan.dim(),
            rays: fan.rays().to_vec(),
            max_cones: fan.cones().iter().map(|c| c.iter().map(|i| i + 1).collect()).collect(),
            bundle: BundleData { rank: bundle.rank(), filtrations },
        }
    }
}

/// Parse and validate a bundle file in one step.
pub fn read_bundle(text: &str) -> Result<QBundle> {
    BundleFile::parse(text)?.to_bundle()
}
