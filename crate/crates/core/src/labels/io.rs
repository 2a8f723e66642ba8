//! CSV layouts:
//!
//! - votes: `entity_id,scale,votes_left,votes_right`
//! - labels: `entity_id,ei,sn,tf,jp,total_votes`
//! - Big 5: `entity_id,o,c,e,a,n`
//!
//! The `scale` column holds `EI`, `SN`, `TF` or `JP`.
//!
//! Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Big5Vector, MbtiVector, Scale, VoteRecord};
use crate::{Error, Result};

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(r)
}

#[derive(Debug, Serialize, Deserialize)]
struct VoteRow {
    entity_id: String,
    scale: String,
    votes_left: u64,
    votes_right: u64,
}

/// All vote records of one rated entity.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityVotes {
    pub entity_id: String,
    pub records: Vec<VoteRecord>,
}

/// Reads a votes table, grouped by entity in lexicographic order.
pub fn read_votes_csv<R: Read>(r: R) -> Result<Vec<EntityVotes>> {
    let mut by_entity: BTreeMap<String, Vec<VoteRecord>> = BTreeMap::new();
    for row in reader(r).deserialize() {
        let row: VoteRow = row?;
        let scale: Scale = row.scale.parse()?;
        by_entity
            .entry(row.entity_id)
            .or_default()
            .push(VoteRecord::new(scale, row.votes_left, row.votes_right));
    }
    Ok(by_entity.into_iter().map(|(entity_id, records)| EntityVotes { entity_id, records }).collect())
}

pub fn write_votes_csv<W: Write>(w: W, votes: &[EntityVotes]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for e in votes {
        for r in &e.records {
            out.serialize(VoteRow {
                entity_id: e.entity_id.clone(),
                scale: r.scale.key().to_uppercase(),
                votes_left: r.votes_left,
                votes_right: r.votes_right,
            })?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct LabelRow {
    entity_id: String,
    ei: f64,
    sn: f64,
    tf: f64,
    jp: f64,
    total_votes: u64,
}

pub fn write_labels_csv<W: Write>(w: W, labels: &[(String, MbtiVector)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (id, m) in labels {
        out.serialize(LabelRow { entity_id: id.clone(), ei: m.ei, sn: m.sn, tf: m.tf, jp: m.jp, total_votes: m.total_votes })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_labels_csv<R: Read>(r: R) -> Result<Vec<(String, MbtiVector)>> {
    let mut out = Vec::new();
    for row in reader(r).deserialize() {
        let row: LabelRow = row?;
        let m = MbtiVector::from_array([row.ei, row.sn, row.tf, row.jp], row.total_votes);
        if m.to_array().iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid(format!("label of {} outside [0, 1]", row.entity_id)));
        }
        out.push((row.entity_id, m));
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
struct Big5Row {
    entity_id: String,
    o: f64,
    c: f64,
    e: f64,
    a: f64,
    n: f64,
}

pub fn read_big5_csv<R: Read>(r: R) -> Result<Vec<(String, Big5Vector)>> {
    let mut out = Vec::new();
    for row in reader(r).deserialize() {
        let row: Big5Row = row?;
        let b = Big5Vector::from_array([row.o, row.c, row.e, row.a, row.n]);
        if b.to_array().iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid(format!("Big 5 profile of {} outside [0, 1]", row.entity_id)));
        }
        out.push((row.entity_id, b));
    }
    Ok(out)
}

pub fn write_big5_csv<W: Write>(w: W, rows: &[(String, Big5Vector)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (id, b) in rows {
        let [o, c, e, a, n] = b.to_array();
        out.serialize(Big5Row { entity_id: id.clone(), o, c, e, a, n })?;
    }
    out.flush()?;
    Ok(())
}
