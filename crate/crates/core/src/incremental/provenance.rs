//! Support records: which rule instantiations justify which triples.

use std::hash::BuildHasher;

use hashbrown::HashTable;
use rustc_hash::{FxBuildHasher, FxHashMap, FxHashSet};

use crate::store::{Origin, Triple, TripleStore};

pub type SupportId = usize;

/// One rule instantiation: `premises` (in rule-body order) fire `rule`
/// (an index into the program) to produce `fact`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Support {
    pub fact: Triple,
    pub rule: usize,
    pub premises: Box<[Triple]>,
}

/// All recorded supports, indexed both by conclusion and by premise.
///
/// Support ids are never reused, so a stale id left in a `used_by` list
/// simply resolves to nothing. [`ProvenanceIndex::compact`] renumbers once
/// stale slots dominate.
#[derive(Debug, Clone, Default)]
pub struct ProvenanceIndex {
    slots: Vec<Option<Support>>,
    live: usize,
    supports_of: FxHashMap<Triple, Vec<SupportId>>,
    used_by: FxHashMap<Triple, Vec<SupportId>>,
    /// Ids of live supports keyed by their content, for duplicate
    /// suppression without a second copy of the premises.
    known: HashTable<SupportId>,
}

impl ProvenanceIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn clear(&mut self) {
        *self = Self::default();
    }

    pub fn get(&self, id: SupportId) -> Option<&Support> {
        self.slots.get(id).and_then(Option::as_ref)
    }

    /// Records a support unless an identical one exists. Returns whether it
    /// was new.
    pub fn add(&mut self, support: Support) -> bool {
        let hash = content_hash(&support.fact, support.rule, &support.premises);
        if self.find(hash, &support.fact, support.rule, &support.premises).is_some() {
            return false;
        }
        self.insert_new(hash, support);
        true
    }

    /// Like [`ProvenanceIndex::add`], but only allocates when the
    /// instantiation is new.
    pub fn add_instance(&mut self, fact: Triple, rule: usize, premises: &[Triple]) -> bool {
        let hash = content_hash(&fact, rule, premises);
        if self.find(hash, &fact, rule, premises).is_some() {
            return false;
        }
        self.insert_new(
            hash,
            Support {
                fact,
                rule,
                premises: premises.into(),
            },
        );
        true
    }

    /// Whether an identical support is recorded.
    pub fn contains(&self, support: &Support) -> bool {
        let hash = content_hash(&support.fact, support.rule, &support.premises);
        self.find(hash, &support.fact, support.rule, &support.premises).is_some()
    }

    fn find(&self, hash: u64, fact: &Triple, rule: usize, premises: &[Triple]) -> Option<SupportId> {
        self.known
            .find(hash, |&id| {
                self.slots[id]
                    .as_ref()
                    .is_some_and(|s| s.fact == *fact && s.rule == rule && *s.premises == *premises)
            })
            .copied()
    }

    fn insert_new(&mut self, hash: u64, support: Support) {
        let id = self.slots.len();
        self.supports_of.entry(support.fact).or_default().push(id);
        for (i, p) in support.premises.iter().enumerate() {
            if !support.premises[..i].contains(p) {
                self.used_by.entry(*p).or_default().push(id);
            }
        }
        self.slots.push(Some(support));
        self.live += 1;
        let slots = &self.slots;
        self.known.insert_unique(hash, id, |&id| {
            let s = slots[id].as_ref().expect("known ids are live");
            content_hash(&s.fact, s.rule, &s.premises)
        });
    }

    pub fn remove(&mut self, id: SupportId) -> Option<Support> {
        let support = self.slots.get(id)?.as_ref()?;
        let hash = content_hash(&support.fact, support.rule, &support.premises);
        if let Ok(entry) = self.known.find_entry(hash, |&x| x == id) {
            entry.remove();
        }
        let support = self.slots[id].take()?;
        self.live -= 1;
        if let Some(list) = self.supports_of.get_mut(&support.fact) {
            list.retain(|&x| x != id);
            if list.is_empty() {
                self.supports_of.remove(&support.fact);
            }
        }
        // used_by entries for the other premises go stale and are skipped.
        Some(support)
    }

    pub fn support_ids_of(&self, fact: &Triple) -> &[SupportId] {
        self.supports_of.get(fact).map_or(&[], Vec::as_slice)
    }

    pub fn supports_of<'a>(&'a self, fact: &Triple) -> impl Iterator<Item = &'a Support> + 'a {
        self.support_ids_of(fact)
            .iter()
            .filter_map(move |&id| self.get(id))
    }

    pub fn has_support(&self, fact: &Triple) -> bool {
        self.supports_of.get(fact).is_some_and(|l| !l.is_empty())
    }

    /// Live supports that use `fact` as a premise.
    pub fn used_by(&self, fact: &Triple) -> Vec<SupportId> {
        self.used_by
            .get(fact)
            .map(|ids| {
                ids.iter()
                    .copied()
                    .filter(|&id| self.get(id).is_some())
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Forgets the premise index entry for a triple that left the store.
    pub(crate) fn drop_premise_entry(&mut self, fact: &Triple) {
        self.used_by.remove(fact);
    }

    pub fn iter(&self) -> impl Iterator<Item = (SupportId, &Support)> {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(id, s)| s.as_ref().map(|s| (id, s)))
    }

    /// Renumbers supports densely if more than half the slots are stale.
    pub fn compact(&mut self) {
        if self.slots.len() < 1024 || self.slots.len() < 2 * self.live {
            return;
        }
        let supports: Vec<Support> = self.slots.drain(..).flatten().collect();
        self.clear();
        for s in supports {
            self.add(s);
        }
    }

    /// Multiset of live supports in a canonical order, for comparisons.
    pub fn canonical(&self) -> Vec<Support> {
        let mut all: Vec<Support> = self.iter().map(|(_, s)| s.clone()).collect();
        all.sort();
        all
    }

    /// Verifies the index invariants against `store`:
    /// supports are keyed by their fact, premise links agree both ways,
    /// every premise and conclusion is stored, and every derived triple has
    /// at least one support.
    pub fn audit(&self, store: &TripleStore) -> Result<(), String> {
        let indexed: FxHashSet<(Triple, SupportId)> = self
            .used_by
            .iter()
            .flat_map(|(p, ids)| ids.iter().map(move |&id| (*p, id)))
            .collect();
        let mut live = 0;
        for (id, s) in self.iter() {
            live += 1;
            if !self.support_ids_of(&s.fact).contains(&id) {
                return Err(format!("support {id} missing from supports_of[{}]", s.fact));
            }
            if !store.contains(&s.fact) {
                return Err(format!("support {id} concludes absent fact {}", s.fact));
            }
            for p in s.premises.iter() {
                if !store.contains(p) {
                    return Err(format!("support {id} uses absent premise {p}"));
                }
                if !indexed.contains(&(*p, id)) {
                    return Err(format!("support {id} missing from used_by[{p}]"));
                }
            }
        }
        if live != self.live {
            return Err(format!("live counter {} but {} supports", self.live, live));
        }
        for (fact, ids) in &self.supports_of {
            for &id in ids {
                match self.get(id) {
                    Some(s) if s.fact == *fact => {}
                    _ => return Err(format!("supports_of[{fact}] holds foreign id {id}")),
                }
            }
        }
        for (premise, ids) in &self.used_by {
            for &id in ids {
                if let Some(s) = self.get(id) {
                    if !s.premises.contains(premise) {
                        return Err(format!("used_by[{premise}] holds unrelated support {id}"));
                    }
                }
            }
        }
        for (t, origin) in store.iter_with_origin() {
            if origin == Origin::Derived && !self.has_support(&t) {
                return Err(format!("derived fact {t} has no support"));
            }
        }
        Ok(())
    }
}

fn content_hash(fact: &Triple, rule: usize, premises: &[Triple]) -> u64 {
    FxBuildHasher.hash_one((fact, rule, premises))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::TermId;

    fn t(a: usize, b: usize, c: usize) -> Triple {
        Triple::new(TermId::from_index(a), TermId::from_index(b), TermId::from_index(c))
    }

    fn support(fact: Triple, rule: usize, premises: &[Triple]) -> Support {
        Support {
            fact,
            rule,
            premises: premises.into(),
        }
    }

    #[test]
    fn identical_supports_are_recorded_once() {
        let mut prov = ProvenanceIndex::new();
        let s = support(t(0, 1, 2), 3, &[t(0, 1, 1), t(1, 1, 2)]);
        assert!(prov.add(s.clone()));
        assert!(!prov.add(s.clone()));
        assert!(prov.add(support(t(0, 1, 2), 4, &[t(0, 1, 1), t(1, 1, 2)])));
        assert_eq!(prov.len(), 2);
        assert_eq!(prov.used_by(&t(0, 1, 1)).len(), 2);
    }

    #[test]
    fn repeated_premise_is_indexed_once() {
        let mut prov = ProvenanceIndex::new();
        prov.add(support(t(0, 1, 0), 3, &[t(0, 1, 0), t(0, 1, 0)]));
        assert_eq!(prov.used_by(&t(0, 1, 0)), vec![0]);
    }

    #[test]
    fn removal_leaves_stale_links_invisible() {
        let mut prov = ProvenanceIndex::new();
        prov.add(support(t(0, 1, 2), 3, &[t(0, 1, 1), t(1, 1, 2)]));
        let removed = prov.remove(0).unwrap();
        assert_eq!(removed.fact, t(0, 1, 2));
        assert!(prov.is_empty());
        assert!(prov.used_by(&t(0, 1, 1)).is_empty());
        assert!(!prov.has_support(&t(0, 1, 2)));
        assert!(prov.remove(0).is_none());
    }
}
