//! JSON file formats.
//!
//! - Poset: `{"elements": p, "relations": [[a, b], ...]}` with 0-based labels,
//!   any generating set of the order.
//! - Family: `{"n": n, "sets": [[1, 3], [2], ...]}` with 1-based labels, each
//!   inner list strictly increasing.
//! - Packed copies: a list of family objects, each with a `"layer"` tag.
//!
//! Big integers are written as decimal strings.

use serde::{Deserialize, Serialize};

use crate::embedding::{ClosureCertificate, Mode};
use crate::error::{Error, Result};
use crate::lattice::{Family, Subset};
use crate::numbers::BigNat;
use crate::packing::{LayerSpec, Letter, PackedCopy, PackingPlan};
use crate::poset::{bits, Poset};

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub elements: usize,
    pub relations: Vec<[usize; 2]>,
}

impl From<&Poset> for PosetJson {
    fn from(p: &Poset) -> Self {
        PosetJson {
            elements: p.size(),
            relations: p.covers().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl PosetJson {
    pub fn to_poset(&self) -> Result<Poset> {
        let rel: Vec<(usize, usize)> = self.relations.iter().map(|r| (r[0], r[1])).collect();
        Poset::new(self.elements, &rel)
    }
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    serde_json::from_str::<PosetJson>(text)
        .map_err(parse_err)?
        .to_poset()
}

pub fn poset_to_json(p: &Poset) -> String {
    serde_json::to_string(&PosetJson::from(p)).expect("serializable")
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyJson {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

/// 1-based element lists, validated as strictly increasing.
pub fn subset_from_list(n: usize, list: &[usize]) -> Result<Subset> {
    if list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parse(format!(
            "set {list:?} is not strictly increasing"
        )));
    }
    Subset::from_elements(n, list)
}

pub fn mask_to_list(mask: u64) -> Vec<usize> {
    bits(mask).map(|i| i + 1).collect()
}

impl FamilyJson {
    pub fn to_family(&self) -> Result<Family> {
        let subsets = self
            .sets
            .iter()
            .map(|s| subset_from_list(self.n, s))
            .collect::<Result<Vec<_>>>()?;
        Family::from_subsets(self.n, &subsets)
    }

    pub fn from_family(f: &Family) -> FamilyJson {
        FamilyJson {
            n: f.ground(),
            sets: f.masks().iter().map(|&m| mask_to_list(m)).collect(),
        }
    }
}

pub fn parse_family(text: &str) -> Result<Family> {
    serde_json::from_str::<FamilyJson>(text)
        .map_err(parse_err)?
        .to_family()
}

pub fn family_to_json(f: &Family) -> String {
    serde_json::to_string(&FamilyJson::from_family(f)).expect("serializable")
}

/// A word letter: a 1-based subset of `[k]`, or `"E"`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum LetterJson {
    Set(Vec<usize>),
    End(String),
}

impl From<&Letter> for LetterJson {
    fn from(l: &Letter) -> Self {
        match l {
            Letter::Set(m) => LetterJson::Set(mask_to_list(*m)),
            Letter::End => LetterJson::End("E".into()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LayerJson {
    pub j: usize,
    #[serde(rename = "R")]
    pub restriction: Vec<usize>,
    pub b: usize,
    pub word: Vec<LetterJson>,
}

impl From<&LayerSpec> for LayerJson {
    fn from(l: &LayerSpec) -> Self {
        LayerJson {
            j: l.j,
            restriction: l.restriction.clone(),
            b: l.base_rank,
            word: l.word.letters().iter().map(LetterJson::from).collect(),
        }
    }
}

/// One materialized copy. `sets` lists the copy in poset-element order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CopyJson {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layer: Option<LayerJson>,
}

impl CopyJson {
    /// Masks in listed order; each list must be strictly increasing and inside `[n]`.
    pub fn masks(&self) -> Result<Vec<u64>> {
        self.sets
            .iter()
            .map(|s| subset_from_list(self.n, s).map(|x| x.mask()))
            .collect()
    }
}

pub fn copies_to_json(plan: &PackingPlan, copies: &[PackedCopy]) -> Vec<CopyJson> {
    let layers: Vec<LayerJson> = plan.layers.iter().map(LayerJson::from).collect();
    copies
        .iter()
        .map(|c| CopyJson {
            n: plan.n,
            sets: c.sets.iter().map(|&m| mask_to_list(m)).collect(),
            layer: Some(layers[c.layer].clone()),
        })
        .collect()
}

pub fn parse_copies(text: &str) -> Result<Vec<CopyJson>> {
    serde_json::from_str(text).map_err(parse_err)
}

/// Output of the minimum-closure search.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateJson {
    pub mode: String,
    pub m: usize,
    pub k: usize,
    /// Image of each poset element, by label.
    pub witness: Vec<Vec<usize>>,
    pub exhaustive_to: usize,
}

impl From<&ClosureCertificate> for CertificateJson {
    fn from(c: &ClosureCertificate) -> Self {
        CertificateJson {
            mode: c.mode.name().into(),
            m: c.m,
            k: c.k,
            witness: c.witness.image().iter().map(|&m| mask_to_list(m)).collect(),
            exhaustive_to: c.exhaustive_to,
        }
    }
}

impl CertificateJson {
    pub fn mode(&self) -> Result<Mode> {
        match self.mode.as_str() {
            "weak" => Ok(Mode::Weak),
            "strong" => Ok(Mode::Strong),
            other => Err(Error::Parse(format!("unknown mode '{other}'"))),
        }
    }

    /// Witness images as masks over `[k]`.
    pub fn witness_masks(&self) -> Result<Vec<u64>> {
        self.witness
            .iter()
            .map(|s| subset_from_list(self.k, s).map(|x| x.mask()))
            .collect()
    }
}

pub fn certificate_to_json(c: &ClosureCertificate) -> String {
    serde_json::to_string(&CertificateJson::from(c)).expect("serializable")
}

pub fn big(n: &BigNat) -> String {
    n.to_string()
}

pub fn parse_big(s: &str) -> Result<BigNat> {
    s.parse()
        .map_err(|_| Error::Parse(format!("'{s}' is not a natural number")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Limits;
    use crate::embedding::{minimal_closure, Embedding};
    use crate::packing::{build_plan, materialize};
    use crate::poset::StandardPoset;

    #[test]
    fn poset_round_trip() {
        let j = Poset::standard(StandardPoset::J);
        let text = poset_to_json(&j);
        assert_eq!(text, r#"{"elements":4,"relations":[[0,1],[0,3],[1,2]]}"#);
        assert_eq!(parse_poset(&text).unwrap(), j);
        let extra = r#"{"elements":3,"relations":[[0,1],[1,2],[0,2]]}"#;
        assert_eq!(parse_poset(extra).unwrap().covers().len(), 2);
    }

    #[test]
    fn family_round_trip() {
        let text = r#"{"n": 3, "sets": [[1,3],[2],[]]}"#;
        let f = parse_family(text).unwrap();
        assert_eq!(f.masks(), &[0b000, 0b010, 0b101]);
        assert_eq!(parse_family(&family_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn family_errors_carry_position() {
        let err = parse_family("{\"n\": 3,\n \"sets\": [[1,3],[2,]}").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(parse_family(r#"{"n": 3, "sets": [[3,1]]}"#).is_err());
        assert!(parse_family(r#"{"n": 3, "sets": [[1,1]]}"#).is_err());
        assert!(parse_family(r#"{"n": 3, "sets": [[4]]}"#).is_err());
        assert!(parse_family(r#"{"n": 3, "sets": [[0]]}"#).is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let cert = minimal_closure(
            &Poset::standard(StandardPoset::J),
            Mode::Strong,
            None,
            &Limits::default(),
        )
        .unwrap();
        let json = CertificateJson::from(&cert);
        let text = serde_json::to_string(&json).unwrap();
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, json);
        let e = Embedding::new(
            cert.witness.poset().clone(),
            back.k,
            back.witness_masks().unwrap(),
            back.mode().unwrap(),
        )
        .unwrap();
        assert_eq!(e, cert.witness);
    }

    #[test]
    fn copies_round_trip() {
        let v = Embedding::new(
            Poset::standard(StandardPoset::V),
            2,
            vec![0, 1, 2],
            Mode::Weak,
        )
        .unwrap();
        let plan = build_plan(&v, 10, 2, &Limits::default()).unwrap();
        let copies = materialize(&plan, &Limits::default()).unwrap();
        let json = copies_to_json(&plan, &copies);
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains(r#""word":[[1,2],"E"]"#), "{text}");
        let back = parse_copies(&text).unwrap();
        assert_eq!(back, json);
        for (c, j) in copies.iter().zip(&back) {
            assert_eq!(c.sets, j.masks().unwrap());
        }
    }
}
