//! JSON shapes for command output. Big integers are decimal strings.

use serde::{Deserialize, Serialize};

use crate::classify::ClassPartition;
use crate::cycle_index::PolyJson;
use crate::error::Result;
use crate::verify::VerifyReport;

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassifyJson {
    pub n: u64,
    pub class_count: usize,
    pub classes: Vec<ClassJson>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassJson {
    pub id: usize,
    pub rep: Vec<u64>,
    pub size: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Vec<u64>>>,
}

impl ClassifyJson {
    pub fn from_partition(p: &ClassPartition, members: bool) -> Result<Self> {
        let sizes = p.class_sizes();
        let all = members.then(|| p.all_members());
        let classes = (0..p.count())
            .map(|id| {
                Ok(ClassJson {
                    id,
                    rep: p.rep(id)?.to_vec(),
                    size: sizes[id],
                    members: all.as_ref().map(|m| m[id].iter().map(|a| a.to_vec()).collect()),
                })
            })
            .collect::<Result<_>>()?;
        Ok(ClassifyJson { n: p.modulus().get(), class_count: p.count(), classes })
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CountJson {
    pub n: u64,
    pub count: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EvalJson {
    pub n: u64,
    pub at: i64,
    pub value: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub(crate) struct CompareJson {
    pub n: u64,
    pub equal: bool,
    pub enumerated: PolyJson,
    pub closed_form: PolyJson,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IsotopicJson {
    pub n: u64,
    pub a: Vec<u64>,
    pub c: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brute: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerifyJson {
    pub passed: bool,
    pub checks: Vec<CheckJson>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckJson {
    pub name: String,
    pub status: String,
    pub elapsed_ms: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl From<&VerifyReport> for VerifyJson {
    fn from(r: &VerifyReport) -> Self {
        VerifyJson {
            passed: r.passed(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name.clone(),
                    status: if c.passed() { "pass" } else { "fail" }.into(),
                    elapsed_ms: c.elapsed.as_millis(),
                    counterexample: c.counterexample.clone(),
                })
                .collect(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serializes")
}
