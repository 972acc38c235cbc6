//! Document formats shared by the library and the command line.
//!
//! Instance:
//!
//! ```json
//! { "N": 5, "k": 2, "n": 3, "write_policy": "unrestricted", "coding": "mds",
//!   "packets": [[1, 2, 3], [2, 4, 5], [3, 4, 5]] }
//! ```
//!
//! Replication is written `"coding": {"replication": {"groups_per_packet": [[[1, 2], [3, 4]], ...]}}`,
//! one list of `k` groups per packet.
//!
//! Read plan (packet ids 1-based):
//!
//! ```json
//! { "served": [1, 2], "assignments": {"1": [1, 2], "2": [4, 5]}, "throughput": "4/5" }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Coding, SwitchInstance, WritePolicy};
use crate::plan::{throughput, ReadPlan};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodingDocument {
    Mds,
    Replication { groups_per_packet: Vec<Vec<Vec<usize>>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    #[serde(rename = "N")]
    pub n_units: usize,
    pub k: usize,
    pub n: usize,
    #[serde(default = "default_policy")]
    pub write_policy: WritePolicy,
    #[serde(default = "default_coding")]
    pub coding: CodingDocument,
    pub packets: Vec<Vec<usize>>,
}

fn default_policy() -> WritePolicy {
    WritePolicy::Unrestricted
}

fn default_coding() -> CodingDocument {
    CodingDocument::Mds
}

impl From<&SwitchInstance> for InstanceDocument {
    fn from(inst: &SwitchInstance) -> Self {
        InstanceDocument {
            n_units: inst.n_units,
            k: inst.k,
            n: inst.n,
            write_policy: inst.write_policy,
            coding: match &inst.coding {
                Coding::Mds => CodingDocument::Mds,
                Coding::Replication { groups } => CodingDocument::Replication { groups_per_packet: groups.clone() },
            },
            packets: inst.packets.clone(),
        }
    }
}

impl From<InstanceDocument> for SwitchInstance {
    fn from(doc: InstanceDocument) -> Self {
        let coding = match doc.coding {
            CodingDocument::Mds => Coding::Mds,
            CodingDocument::Replication { groups_per_packet } => Coding::Replication { groups: groups_per_packet },
        };
        SwitchInstance::with_policy(doc.n_units, doc.k, doc.n, doc.packets, doc.write_policy, coding)
    }
}

/// Parses and validates an instance document. Syntax errors carry line and
/// column; rule violations name the packet.
pub fn parse_instance(bytes: &[u8]) -> Result<SwitchInstance> {
    let doc: InstanceDocument = serde_json::from_slice(bytes).map_err(|e| Error::Document(e.to_string()))?;
    let inst = SwitchInstance::from(doc);
    inst.ensure_valid()?;
    Ok(inst)
}

pub fn instance_to_json(inst: &SwitchInstance) -> String {
    serde_json::to_string_pretty(&InstanceDocument::from(inst)).expect("instance serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub served: Vec<usize>,
    pub assignments: BTreeMap<usize, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub throughput: Option<String>,
}

impl PlanDocument {
    pub fn from_plan(inst: &SwitchInstance, plan: &ReadPlan) -> Result<Self> {
        let rho = throughput(inst, plan.served_count())?;
        Ok(PlanDocument {
            served: plan.served.iter().map(|p| p + 1).collect(),
            assignments: plan.assignments.iter().map(|(p, u)| (p + 1, u.clone())).collect(),
            throughput: Some(format!("{}/{}", rho.numer(), rho.denom())),
        })
    }

    pub fn to_plan(&self) -> Result<ReadPlan> {
        if self.served.contains(&0) || self.assignments.contains_key(&0) {
            return Err(Error::Document("packet ids start at 1".into()));
        }
        let mut plan = ReadPlan::from_assignments(self.assignments.iter().map(|(p, u)| (p - 1, u.clone())));
        plan.served = self.served.iter().map(|p| p - 1).collect();
        Ok(plan)
    }
}

pub fn parse_plan(bytes: &[u8]) -> Result<ReadPlan> {
    let doc: PlanDocument = serde_json::from_slice(bytes).map_err(|e| Error::Document(e.to_string()))?;
    doc.to_plan()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE1: &str = r#"{"N": 5, "k": 2, "n": 3, "write_policy": "unrestricted", "coding": "mds",
        "packets": [[1, 2, 3], [2, 4, 5], [3, 4, 5]]}"#;

    #[test]
    fn parses_example1() {
        let inst = parse_instance(EXAMPLE1.as_bytes()).unwrap();
        assert_eq!(inst.num_packets(), 3);
        assert_eq!(inst.k, 2);
        let again = parse_instance(instance_to_json(&inst).as_bytes()).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn reports_rule_violations() {
        let doc = r#"{"N": 5, "k": 4, "n": 3, "packets": [[1, 2, 3]]}"#;
        let err = parse_instance(doc.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("k exceeds n"), "{err}");
    }

    #[test]
    fn syntax_errors_are_positioned() {
        let err = parse_instance(b"{\"N\": 5,\n \"k\": }").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn empty_packet_list() {
        let inst = parse_instance(br#"{"N": 4, "k": 1, "n": 2, "packets": []}"#).unwrap();
        assert_eq!(inst.num_packets(), 0);
    }

    #[test]
    fn replication_document() {
        let doc = r#"{"N": 4, "k": 2, "n": 4, "coding": {"replication": {"groups_per_packet": [[[1, 2], [3, 4]]]}},
            "packets": [[1, 2, 3, 4]]}"#;
        let inst = parse_instance(doc.as_bytes()).unwrap();
        assert_eq!(inst.coding.packet_groups(0).unwrap().len(), 2);
        assert!(instance_to_json(&inst).contains("groups_per_packet"));
    }

    #[test]
    fn plan_document_round_trip() {
        let inst = parse_instance(EXAMPLE1.as_bytes()).unwrap();
        let plan = ReadPlan::from_assignments([(0, vec![1, 2]), (1, vec![4, 5])]);
        let doc = PlanDocument::from_plan(&inst, &plan).unwrap();
        assert_eq!(doc.throughput.as_deref(), Some("4/5"));
        assert_eq!(doc.served, vec![1, 2]);
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(json, r#"{"served":[1,2],"assignments":{"1":[1,2],"2":[4,5]},"throughput":"4/5"}"#);
        assert_eq!(parse_plan(json.as_bytes()).unwrap(), plan);
    }
}
