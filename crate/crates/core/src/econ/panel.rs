//! CSV layouts:
//!
//! - panel: `call_id,date,sic,age,gender,price_file,leverage,spread,btm,sue,roa,shares_out,volume`
//! - prices (one file per firm): `date,close`
//!
//! Market capitalization (`size`) is `shares_out` times the last close
//! before the call date.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::industry::{ff12_industry, Ff12};
use super::returns::{realized_vol, PriceSeries, Window, PAST_WINDOW_DAYS, POST_WINDOW_DAYS};
use crate::corpus::FiscalQuarter;
use crate::labels::MbtiVector;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelRecord {
    pub call_id: String,
    pub date: NaiveDate,
    pub sic: u32,
    pub age: f64,
    pub gender: u8,
    pub price_file: String,
    pub leverage: f64,
    pub spread: f64,
    pub btm: f64,
    pub sue: f64,
    pub roa: f64,
    pub shares_out: f64,
    pub volume: f64,
}

/// One call with its volatility label and raw (untransformed) controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskRow {
    pub call_id: String,
    pub vola_post: f64,
    pub age: f64,
    pub gender: f64,
    pub past_vola: f64,
    pub size: f64,
    pub volume: f64,
    pub leverage: f64,
    pub spread: f64,
    pub btm: f64,
    pub sue: f64,
    pub roa: f64,
    pub mbti: Option<MbtiVector>,
    pub industry: Ff12,
    pub period: FiscalQuarter,
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(r)
}

pub fn read_panel_csv<R: Read>(r: R) -> Result<Vec<PanelRecord>> {
    let mut out = Vec::new();
    for row in reader(r).deserialize() {
        let rec: PanelRecord = row?;
        if rec.gender > 1 {
            return Err(Error::invalid(format!("call {}: gender must be 0 or 1, got {}", rec.call_id, rec.gender)));
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn write_panel_csv<W: Write>(w: W, records: &[PanelRecord]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct PriceRow {
    date: NaiveDate,
    close: f64,
}

pub fn read_prices_csv<R: Read>(r: R) -> Result<PriceSeries> {
    let mut points = Vec::new();
    for row in reader(r).deserialize() {
        let row: PriceRow = row?;
        points.push((row.date, row.close));
    }
    PriceSeries::new(points)
}

pub fn write_prices_csv<W: Write>(w: W, series: &PriceSeries) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for &(date, close) in series.points() {
        wr.serialize(PriceRow { date, close })?;
    }
    wr.flush()?;
    Ok(())
}

/// Rows built from a panel, plus the calls left out for lack of a
/// personality prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct Assembly {
    pub rows: Vec<RiskRow>,
    pub missing_mbti: Vec<String>,
}

/// Computes volatility label, past volatility and size for each panel
/// record. When `mbti` is given, calls without an entry are skipped and
/// listed in [`Assembly::missing_mbti`].
pub fn assemble_rows(
    records: &[PanelRecord],
    prices: &BTreeMap<String, PriceSeries>,
    mbti: Option<&BTreeMap<String, MbtiVector>>,
) -> Result<Assembly> {
    let mut rows = Vec::with_capacity(records.len());
    let mut missing_mbti = Vec::new();
    for rec in records {
        let traits = match mbti {
            Some(m) => match m.get(&rec.call_id) {
                Some(v) => Some(*v),
                None => {
                    missing_mbti.push(rec.call_id.clone());
                    continue;
                }
            },
            None => None,
        };
        let series = prices
            .get(&rec.price_file)
            .ok_or_else(|| Error::NotFound(format!("price file `{}` for call {}", rec.price_file, rec.call_id)))?;
        let call = |e: Error| Error::invalid(format!("call {}: {e}", rec.call_id));
        let vola_post = realized_vol(series, Window::After { date: rec.date, days: POST_WINDOW_DAYS }).map_err(call)?;
        let past_vola = realized_vol(series, Window::Before { date: rec.date, days: PAST_WINDOW_DAYS }).map_err(call)?;
        let close = series
            .close_before(rec.date)
            .ok_or_else(|| Error::invalid(format!("call {}: no price before the call date", rec.call_id)))?;
        rows.push(RiskRow {
            call_id: rec.call_id.clone(),
            vola_post,
            age: rec.age,
            gender: rec.gender as f64,
            past_vola,
            size: rec.shares_out * close,
            volume: rec.volume,
            leverage: rec.leverage,
            spread: rec.spread,
            btm: rec.btm,
            sue: rec.sue,
            roa: rec.roa,
            mbti: traits,
            industry: ff12_industry(rec.sic).map_err(call)?,
            period: FiscalQuarter::from_date(rec.date),
        });
    }
    Ok(Assembly { rows, missing_mbti })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PANEL: &str = "\
call_id,date,sic,age,gender,price_file,leverage,spread,btm,sue,roa,shares_out,volume
# comment
c1,2020-01-08,3571,55,1,f1.csv,0.4,0.01,0.7,0.02,0.05,1000,20000
";

    #[test]
    fn panel_round_trip() {
        let recs = read_panel_csv(PANEL.as_bytes()).unwrap();
        assert_eq!(recs.len(), 1);
        let mut buf = Vec::new();
        write_panel_csv(&mut buf, &recs).unwrap();
        assert_eq!(read_panel_csv(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn assembles_row() {
        let recs = read_panel_csv(PANEL.as_bytes()).unwrap();
        let d0 = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let pts: Vec<(NaiveDate, f64)> =
            (0..16).map(|i| (d0 + chrono::Days::new(i), 10.0 + (i % 3) as f64)).collect();
        let series = PriceSeries::new(pts).unwrap();
        let mut prices = BTreeMap::new();
        prices.insert("f1.csv".to_string(), series.clone());
        let a = assemble_rows(&recs, &prices, None).unwrap();
        let row = &a.rows[0];
        assert_eq!(row.industry, Ff12::BusEq);
        assert_eq!(row.size, 1000.0 * series.close_before(recs[0].date).unwrap());
        assert!(row.vola_post > 0.0 && row.past_vola > 0.0);

        let empty = BTreeMap::new();
        let a = assemble_rows(&recs, &prices, Some(&empty)).unwrap();
        assert!(a.rows.is_empty());
        assert_eq!(a.missing_mbti, vec!["c1".to_string()]);
        assert!(assemble_rows(&recs, &BTreeMap::new(), None).is_err());
    }
}
