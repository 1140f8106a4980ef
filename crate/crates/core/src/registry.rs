//! Network operator: plain CRUD registry of the parties on the network,
//! optionally persisted as a single JSON document.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::model::{Party, PartyId};

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct Document {
    next_id: u64,
    parties: Vec<Party>,
}

#[derive(Debug)]
pub struct PartyRegistry {
    parties: BTreeMap<u64, Party>,
    next_id: u64,
    path: Option<PathBuf>,
}

fn numeric_id(id: &PartyId) -> Option<u64> {
    id.as_str().strip_prefix("party-")?.parse().ok()
}

impl Default for PartyRegistry {
    fn default() -> Self {
        Self::in_memory()
    }
}

impl PartyRegistry {
    pub fn in_memory() -> Self {
        Self { parties: BTreeMap::new(), next_id: 1, path: None }
    }

    /// Load the registry document at `path`, creating it if missing.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, SimError> {
        let path = path.as_ref().to_path_buf();
        let mut registry = Self { path: Some(path.clone()), ..Self::in_memory() };
        match std::fs::read(&path) {
            Ok(bytes) => {
                let doc: Document = serde_json::from_slice(&bytes).map_err(|e| SimError::Storage(e.to_string()))?;
                registry.next_id = doc.next_id.max(1);
                for party in doc.parties {
                    let n = numeric_id(&party.party_id)
                        .ok_or_else(|| SimError::Storage(format!("bad party id {}", party.party_id)))?;
                    registry.next_id = registry.next_id.max(n + 1);
                    registry.parties.insert(n, party);
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => registry.save()?,
            Err(e) => return Err(SimError::Storage(e.to_string())),
        }
        Ok(registry)
    }

    fn save(&self) -> Result<(), SimError> {
        let Some(path) = &self.path else { return Ok(()) };
        let doc = Document { next_id: self.next_id, parties: self.parties.values().cloned().collect() };
        let bytes = serde_json::to_vec_pretty(&doc).map_err(|e| SimError::Storage(e.to_string()))?;
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| SimError::Storage(e.to_string()))?;
        }
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, bytes)
            .and_then(|()| std::fs::rename(&tmp, path))
            .map_err(|e| SimError::Storage(e.to_string()))
    }

    fn check_fields(&self, name: &str, lei: &str, exclude: Option<u64>) -> Result<(), SimError> {
        if name.trim().is_empty() {
            return Err(SimError::InvalidRequest("party name must not be empty".into()));
        }
        if !lei.is_empty() && self.parties.iter().any(|(n, p)| Some(*n) != exclude && p.legal_entity_id == lei) {
            return Err(SimError::DuplicateLei(lei.to_owned()));
        }
        Ok(())
    }

    pub fn create(&mut self, name: &str, legal_entity_id: &str) -> Result<Party, SimError> {
        self.check_fields(name, legal_entity_id, None)?;
        let n = self.next_id;
        let party = Party {
            party_id: PartyId(format!("party-{n}")),
            name: name.to_owned(),
            legal_entity_id: legal_entity_id.to_owned(),
        };
        self.parties.insert(n, party.clone());
        self.next_id += 1;
        self.save()?;
        Ok(party)
    }

    pub fn get(&self, id: &PartyId) -> Result<Party, SimError> {
        numeric_id(id)
            .and_then(|n| self.parties.get(&n))
            .cloned()
            .ok_or_else(|| SimError::NotFound(format!("party {id}")))
    }

    pub fn contains(&self, id: &PartyId) -> bool {
        self.get(id).is_ok()
    }

    pub fn list(&self) -> Vec<Party> {
        self.parties.values().cloned().collect()
    }

    pub fn update(&mut self, id: &PartyId, name: &str, legal_entity_id: &str) -> Result<Party, SimError> {
        let n = numeric_id(id)
            .filter(|n| self.parties.contains_key(n))
            .ok_or_else(|| SimError::NotFound(format!("party {id}")))?;
        self.check_fields(name, legal_entity_id, Some(n))?;
        let party = self.parties.get_mut(&n).expect("checked above");
        party.name = name.to_owned();
        party.legal_entity_id = legal_entity_id.to_owned();
        let party = party.clone();
        self.save()?;
        Ok(party)
    }

    pub fn delete(&mut self, id: &PartyId) -> Result<Party, SimError> {
        let n = numeric_id(id)
            .filter(|n| self.parties.contains_key(n))
            .ok_or_else(|| SimError::NotFound(format!("party {id}")))?;
        let party = self.parties.remove(&n).expect("checked above");
        self.save()?;
        Ok(party)
    }
}
