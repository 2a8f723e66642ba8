use std::collections::BTreeMap;

use chrono::{Datelike, NaiveDate, Weekday};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use super::{SynthCeo, SynthConfig};
use crate::corpus::FiscalQuarter;
use crate::econ::{ff12_industry, PanelRecord, PriceSeries, RiskRow, PAST_WINDOW_DAYS, POST_WINDOW_DAYS};
use crate::labels::Scale;
use crate::Result;

pub(crate) const MIN_SPACING: usize = PAST_WINDOW_DAYS + POST_WINDOW_DAYS + 1;

/// Standardized effects of past_vola, size, volume, leverage, spread, btm,
/// sue, roa, age and gender on the volatility index.
pub const CONTROL_BETAS: [f64; 10] = [0.85, -0.18, 0.045, -0.057, 0.027, -0.042, 0.0, 0.0, -0.005, -0.018];

/// `n` consecutive weekdays starting at the first weekday on or after `start`.
pub fn trading_calendar(start: NaiveDate, n: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(n);
    let mut d = start;
    while out.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d = d.succ_opt().expect("calendar stays in range");
    }
    out
}

pub(crate) struct Call {
    pub call_id: String,
    pub ceo: usize,
    pub date: NaiveDate,
}

pub(crate) struct Simulation {
    pub rows: Vec<RiskRow>,
    pub panel: Vec<PanelRecord>,
    pub prices: BTreeMap<String, PriceSeries>,
    pub calls: Vec<Call>,
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn standardize(v: &[f64]) -> Vec<f64> {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    if sd > 0.0 { v.iter().map(|x| (x - mean) / sd).collect() } else { vec![0.0; v.len()] }
}

/// Window returns with an exact sample standard deviation.
fn window_returns(rng: &mut ChaCha8Rng, n: usize, sd: f64) -> Vec<f64> {
    let z: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
    standardize(&z).into_iter().map(|v| v * sd).collect()
}

struct RawCall {
    ceo: usize,
    t: usize,
    past_vola: f64,
    size: f64,
    volume: f64,
    leverage: f64,
    spread: f64,
    btm: f64,
    sue: f64,
    roa: f64,
    age: f64,
}

/// Draws controls for every call, builds the volatility label from the
/// planted standardized effects, and realizes both volatilities in daily
/// price paths.
pub(crate) fn simulate(cfg: &SynthConfig, people: &[SynthCeo], rng: &mut ChaCha8Rng) -> Result<Simulation> {
    let calls_per = cfg.calls_per();
    let spacing = cfg.call_spacing;
    let max_calls = calls_per.iter().copied().max().unwrap_or(1);
    let days = PAST_WINDOW_DAYS + 1 + spacing + (max_calls - 1) * spacing + POST_WINDOW_DAYS + 1;
    let calendar = trading_calendar(cfg.start_date, days);
    let leverage_dist = Beta::new(2.0, 3.0).expect("valid beta");

    let mut raw = Vec::new();
    let mut firm_sigma = Vec::with_capacity(people.len());
    for (i, ceo) in people.iter().enumerate() {
        let offset = rng.random_range(0..spacing);
        let lv = (0.018f64).ln() + 0.3 * normal(rng);
        let size = 22.0 + 1.5 * normal(rng);
        let volume = (2e6f64).ln() + 0.8 * normal(rng);
        let leverage = leverage_dist.sample(rng);
        let spread = (0.002f64).ln() + 0.4 * normal(rng);
        let btm = (0.6f64).ln() + 0.5 * normal(rng);
        let roa = 0.05 + 0.05 * normal(rng);
        firm_sigma.push(lv.exp());
        for k in 0..calls_per[i] {
            let t = PAST_WINDOW_DAYS + 1 + offset + k * spacing;
            raw.push(RawCall {
                ceo: i,
                t,
                past_vola: (lv + 0.15 * normal(rng)).exp(),
                size: (size + 0.05 * normal(rng)).exp(),
                volume: (volume + 0.3 * normal(rng)).exp(),
                leverage: (leverage + 0.02 * normal(rng)).clamp(0.0, 1.0),
                spread: (spread + 0.2 * normal(rng)).exp(),
                btm: (btm + 0.1 * normal(rng)).exp(),
                sue: (0.03 * normal(rng)).abs(),
                roa: roa + 0.02 * normal(rng),
                age: ceo.age + (t as f64 / 252.0).floor(),
            });
        }
    }

    // volatility index on the standardized regressors, as the design sees them
    let columns: Vec<Vec<f64>> = vec![
        raw.iter().map(|r| r.past_vola).collect(),
        raw.iter().map(|r| r.size.ln_1p()).collect(),
        raw.iter().map(|r| r.volume.ln_1p()).collect(),
        raw.iter().map(|r| r.leverage).collect(),
        raw.iter().map(|r| r.spread).collect(),
        raw.iter().map(|r| r.btm.ln_1p()).collect(),
        raw.iter().map(|r| r.sue).collect(),
        raw.iter().map(|r| r.roa).collect(),
        raw.iter().map(|r| r.age).collect(),
        raw.iter().map(|r| people[r.ceo].gender as f64).collect(),
    ];
    let mut terms: Vec<(f64, Vec<f64>)> = CONTROL_BETAS.iter().copied().zip(columns.iter().map(|c| standardize(c))).collect();
    for s in Scale::ALL {
        let col: Vec<f64> = raw.iter().map(|r| people[r.ceo].traits.get(s)).collect();
        terms.push((cfg.risk_betas[s.index()], standardize(&col)));
    }
    let industry_effect: Vec<f64> = (0..12).map(|_| 0.1 * normal(rng)).collect();
    let mut period_effect: BTreeMap<FiscalQuarter, f64> = BTreeMap::new();
    for d in &calendar {
        let q = FiscalQuarter::from_date(*d);
        if !period_effect.contains_key(&q) {
            period_effect.insert(q, 0.1 * normal(rng));
        }
    }
    let mut index: Vec<f64> = (0..raw.len())
        .map(|i| {
            let r = &raw[i];
            let ind = ff12_industry(people[r.ceo].sic).expect("valid SIC").id() as usize - 1;
            terms.iter().map(|(b, z)| b * z[i]).sum::<f64>()
                + industry_effect[ind]
                + period_effect[&FiscalQuarter::from_date(calendar[r.t])]
                + cfg.vola_noise * normal(rng)
        })
        .collect();
    index = standardize(&index);
    let base = (0.025f64).ln();
    let vola_post: Vec<f64> = index.iter().map(|u| (base + cfg.vola_log_sd * u).exp()).collect();

    // price paths
    let mut prices = BTreeMap::new();
    let mut closes_before: Vec<f64> = vec![0.0; raw.len()];
    let mut start = 0;
    for (i, ceo) in people.iter().enumerate() {
        let mine: Vec<usize> = (start..start + calls_per[i]).collect();
        start += calls_per[i];
        let last_t = mine.iter().map(|&j| raw[j].t).max().unwrap_or(PAST_WINDOW_DAYS + 1);
        let len = last_t + POST_WINDOW_DAYS + 1;
        let mut ret: Vec<f64> = (0..len).map(|_| firm_sigma[i] * normal(rng)).collect();
        ret[0] = 0.0;
        for &j in &mine {
            let t = raw[j].t;
            for (k, r) in window_returns(rng, PAST_WINDOW_DAYS, raw[j].past_vola).into_iter().enumerate() {
                ret[t - PAST_WINDOW_DAYS + k] = r;
            }
            for (k, r) in window_returns(rng, POST_WINDOW_DAYS, vola_post[j]).into_iter().enumerate() {
                ret[t + 1 + k] = r;
            }
        }
        let mut p = 20.0 * (0.5 * normal(rng)).exp();
        let mut pts = Vec::with_capacity(len);
        for t in 0..len {
            p *= ret[t].exp();
            pts.push((calendar[t], p));
        }
        for &j in &mine {
            closes_before[j] = pts[raw[j].t - 1].1;
        }
        prices.insert(format!("prices/{}.csv", ceo.company_id), PriceSeries::new(pts)?);
    }

    let mut rows = Vec::with_capacity(raw.len());
    let mut panel = Vec::with_capacity(raw.len());
    let mut calls = Vec::with_capacity(raw.len());
    let mut k_of = vec![0usize; people.len()];
    for (j, r) in raw.iter().enumerate() {
        let ceo = &people[r.ceo];
        k_of[r.ceo] += 1;
        let call_id = format!("{}-c{:02}", ceo.company_id, k_of[r.ceo]);
        let date = calendar[r.t];
        rows.push(RiskRow {
            call_id: call_id.clone(),
            vola_post: vola_post[j],
            age: r.age,
            gender: ceo.gender as f64,
            past_vola: r.past_vola,
            size: r.size,
            volume: r.volume,
            leverage: r.leverage,
            spread: r.spread,
            btm: r.btm,
            sue: r.sue,
            roa: r.roa,
            mbti: Some(ceo.traits),
            industry: ff12_industry(ceo.sic)?,
            period: FiscalQuarter::from_date(date),
        });
        panel.push(PanelRecord {
            call_id: call_id.clone(),
            date,
            sic: ceo.sic,
            age: r.age,
            gender: ceo.gender,
            price_file: format!("prices/{}.csv", ceo.company_id),
            leverage: r.leverage,
            spread: r.spread,
            btm: r.btm,
            sue: r.sue,
            roa: r.roa,
            shares_out: r.size / closes_before[j],
            volume: r.volume,
        });
        calls.push(Call { call_id, ceo: r.ceo, date });
    }
    Ok(Simulation { rows, panel, prices, calls })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calendar_skips_weekends() {
        let c = trading_calendar(NaiveDate::from_ymd_opt(2024, 1, 5).unwrap(), 3);
        assert_eq!(c[1], NaiveDate::from_ymd_opt(2024, 1, 8).unwrap());
        assert!(c.iter().all(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun)));
    }

    #[test]
    fn exact_window_sd() {
        let mut rng = rand::SeedableRng::seed_from_u64(3);
        let r = window_returns(&mut rng, 5, 0.02);
        let m = r.iter().sum::<f64>() / 5.0;
        let sd = (r.iter().map(|v| (v - m).powi(2)).sum::<f64>() / 4.0).sqrt();
        assert!((sd - 0.02).abs() < 1e-15);
    }
}
