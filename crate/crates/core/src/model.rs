//! Item catalog, transaction vectors and the immutable dataset built from them.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The fixed, ordered item set every transaction is encoded against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemCatalog {
    items: Vec<String>,
    index: HashMap<String, usize>,
}

impl ItemCatalog {
    pub fn new(items: Vec<String>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptyCatalog);
        }
        let mut index = HashMap::with_capacity(items.len());
        for (k, item) in items.iter().enumerate() {
            if item.is_empty() {
                return Err(Error::EmptyItem);
            }
            if index.insert(item.clone(), k).is_some() {
                return Err(Error::DuplicateItem(item.clone()));
            }
        }
        Ok(Self { items, index })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn position(&self, item: &str) -> Option<usize> {
        self.index.get(item).copied()
    }
}

/// Per-transaction item counts with their derived presence flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionVector {
    tid: String,
    counts: Vec<u32>,
    presence: Vec<bool>,
}

impl TransactionVector {
    pub fn new(tid: impl Into<String>, counts: Vec<u32>) -> Self {
        let presence = counts.iter().map(|&c| c > 0).collect();
        Self {
            tid: tid.into(),
            counts,
            presence,
        }
    }

    pub fn tid(&self) -> &str {
        &self.tid
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn presence(&self) -> &[bool] {
        &self.presence
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// True when no catalog item is present.
    pub fn is_all_absent(&self) -> bool {
        !self.presence.iter().any(|&p| p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Binary,
    Counted,
}

/// An ordered collection of transactions over one catalog. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    catalog: ItemCatalog,
    transactions: Vec<TransactionVector>,
    positions: HashMap<String, usize>,
    mode: Mode,
}

impl Dataset {
    /// Builds a dataset from long-form basket records.
    ///
    /// The catalog is the sorted union of all items seen. Repeated items inside
    /// one record are summed. A record with no items becomes an all-absent row.
    pub fn from_records<I, T, S>(records: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, Vec<(S, i64)>)>,
        T: Into<String>,
        S: Into<String>,
    {
        let mut grouped: Vec<(String, BTreeMap<String, i64>)> = Vec::new();
        let mut seen = HashSet::new();
        let mut all_items = BTreeMap::new();

        for (tid, items) in records {
            let tid = tid.into();
            if tid.is_empty() {
                return Err(Error::EmptyTransactionId);
            }
            if !seen.insert(tid.clone()) {
                return Err(Error::DuplicateTransaction(tid));
            }
            let mut basket = BTreeMap::new();
            for (item, count) in items {
                let item = item.into();
                if item.is_empty() {
                    return Err(Error::EmptyItem);
                }
                if count < 1 {
                    return Err(Error::InvalidCount { tid, item, count });
                }
                *basket.entry(item.clone()).or_insert(0i64) += count;
                all_items.insert(item, ());
            }
            grouped.push((tid, basket));
        }

        if grouped.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let catalog = ItemCatalog::new(all_items.into_keys().collect())?;
        let mut rows = Vec::with_capacity(grouped.len());
        for (tid, basket) in grouped {
            let mut counts = vec![0u32; catalog.len()];
            for (item, count) in basket {
                let k = catalog.position(&item).expect("item collected above");
                counts[k] = u32::try_from(count).map_err(|_| Error::InvalidCount {
                    tid: tid.clone(),
                    item,
                    count,
                })?;
            }
            rows.push(TransactionVector::new(tid, counts));
        }
        Self::assemble(catalog, rows)
    }

    /// Builds a dataset from a dense count matrix, keeping the given item order.
    pub fn from_rows<T: Into<String>>(
        items: Vec<String>,
        rows: impl IntoIterator<Item = (T, Vec<u32>)>,
    ) -> Result<Self> {
        let catalog = ItemCatalog::new(items)?;
        let mut seen = HashSet::new();
        let mut transactions = Vec::new();
        for (tid, counts) in rows {
            let tid = tid.into();
            if tid.is_empty() {
                return Err(Error::EmptyTransactionId);
            }
            if counts.len() != catalog.len() {
                return Err(Error::RowLength {
                    tid,
                    got: counts.len(),
                    expected: catalog.len(),
                });
            }
            if !seen.insert(tid.clone()) {
                return Err(Error::DuplicateTransaction(tid));
            }
            transactions.push(TransactionVector::new(tid, counts));
        }
        if transactions.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Self::assemble(catalog, transactions)
    }

    fn assemble(catalog: ItemCatalog, transactions: Vec<TransactionVector>) -> Result<Self> {
        let binary = transactions
            .iter()
            .all(|t| t.counts().iter().all(|&c| c <= 1));
        let positions = transactions
            .iter()
            .enumerate()
            .map(|(i, t)| (t.tid().to_owned(), i))
            .collect();
        Ok(Self {
            catalog,
            transactions,
            positions,
            mode: if binary { Mode::Binary } else { Mode::Counted },
        })
    }

    pub fn catalog(&self) -> &ItemCatalog {
        &self.catalog
    }

    pub fn transactions(&self) -> &[TransactionVector] {
        &self.transactions
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Number of transactions.
    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.transactions.iter().map(|t| t.tid())
    }

    pub fn index_of(&self, tid: &str) -> Result<usize> {
        self.positions
            .get(tid)
            .copied()
            .ok_or_else(|| Error::NotFound(tid.to_owned()))
    }

    pub fn get_vector(&self, tid: &str) -> Result<&TransactionVector> {
        Ok(&self.transactions[self.index_of(tid)?])
    }

    /// Count column of item `k` across all transactions, in dataset order.
    pub fn column(&self, k: usize) -> impl Iterator<Item = u32> + '_ {
        self.transactions.iter().map(move |t| t.counts()[k])
    }

    /// Transaction contents keyed by item name, independent of catalog order.
    pub fn contents(&self) -> Vec<(&str, BTreeMap<&str, u32>)> {
        self.transactions
            .iter()
            .map(|t| {
                let basket = self
                    .catalog
                    .items()
                    .iter()
                    .zip(t.counts())
                    .filter(|(_, &c)| c > 0)
                    .map(|(item, &c)| (item.as_str(), c))
                    .collect();
                (t.tid(), basket)
            })
            .collect()
    }
}
