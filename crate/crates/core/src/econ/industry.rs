use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Fama-French 12 industry portfolios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ff12 {
    NoDur = 1,
    Durbl = 2,
    Manuf = 3,
    Enrgy = 4,
    Chems = 5,
    BusEq = 6,
    Telcm = 7,
    Utils = 8,
    Shops = 9,
    Hlth = 10,
    Money = 11,
    Other = 12,
}

impl Ff12 {
    pub const ALL: [Ff12; 12] = [
        Ff12::NoDur,
        Ff12::Durbl,
        Ff12::Manuf,
        Ff12::Enrgy,
        Ff12::Chems,
        Ff12::BusEq,
        Ff12::Telcm,
        Ff12::Utils,
        Ff12::Shops,
        Ff12::Hlth,
        Ff12::Money,
        Ff12::Other,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        Self::ALL.get((id as usize).checked_sub(1)?).copied()
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Ff12::NoDur => "NoDur",
            Ff12::Durbl => "Durbl",
            Ff12::Manuf => "Manuf",
            Ff12::Enrgy => "Enrgy",
            Ff12::Chems => "Chems",
            Ff12::BusEq => "BusEq",
            Ff12::Telcm => "Telcm",
            Ff12::Utils => "Utils",
            Ff12::Shops => "Shops",
            Ff12::Hlth => "Hlth",
            Ff12::Money => "Money",
            Ff12::Other => "Other",
        }
    }
}

impl fmt::Display for Ff12 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

const RANGES: &[(u16, u16, Ff12)] = &[
    (100, 999, Ff12::NoDur),
    (2000, 2399, Ff12::NoDur),
    (2700, 2749, Ff12::NoDur),
    (2770, 2799, Ff12::NoDur),
    (3100, 3199, Ff12::NoDur),
    (3940, 3989, Ff12::NoDur),
    (2500, 2519, Ff12::Durbl),
    (2590, 2599, Ff12::Durbl),
    (3630, 3659, Ff12::Durbl),
    (3710, 3711, Ff12::Durbl),
    (3714, 3714, Ff12::Durbl),
    (3716, 3716, Ff12::Durbl),
    (3750, 3751, Ff12::Durbl),
    (3792, 3792, Ff12::Durbl),
    (3900, 3939, Ff12::Durbl),
    (3990, 3999, Ff12::Durbl),
    (2520, 2589, Ff12::Manuf),
    (2600, 2699, Ff12::Manuf),
    (2750, 2769, Ff12::Manuf),
    (3000, 3099, Ff12::Manuf),
    (3200, 3569, Ff12::Manuf),
    (3580, 3629, Ff12::Manuf),
    (3700, 3709, Ff12::Manuf),
    (3712, 3713, Ff12::Manuf),
    (3715, 3715, Ff12::Manuf),
    (3717, 3749, Ff12::Manuf),
    (3752, 3791, Ff12::Manuf),
    (3793, 3799, Ff12::Manuf),
    (3830, 3839, Ff12::Manuf),
    (3860, 3899, Ff12::Manuf),
    (1200, 1399, Ff12::Enrgy),
    (2900, 2999, Ff12::Enrgy),
    (2800, 2829, Ff12::Chems),
    (2840, 2899, Ff12::Chems),
    (3570, 3579, Ff12::BusEq),
    (3660, 3692, Ff12::BusEq),
    (3694, 3699, Ff12::BusEq),
    (3810, 3829, Ff12::BusEq),
    (7370, 7379, Ff12::BusEq),
    (4800, 4899, Ff12::Telcm),
    (4900, 4949, Ff12::Utils),
    (5000, 5999, Ff12::Shops),
    (7200, 7299, Ff12::Shops),
    (7600, 7699, Ff12::Shops),
    (2830, 2839, Ff12::Hlth),
    (3693, 3693, Ff12::Hlth),
    (3840, 3859, Ff12::Hlth),
    (8000, 8099, Ff12::Hlth),
    (6000, 6999, Ff12::Money),
];

/// Maps a four-digit SIC code (0000-9999) to its FF12 industry; codes
/// outside every listed range fall into `Other`.
pub fn ff12_industry(sic: u32) -> Result<Ff12> {
    if sic > 9999 {
        return Err(Error::invalid(format!("SIC code {sic} is not a 4-digit code")));
    }
    let sic = sic as u16;
    Ok(RANGES.iter().find(|(lo, hi, _)| (*lo..=*hi).contains(&sic)).map_or(Ff12::Other, |r| r.2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_codes() {
        assert_eq!(ff12_industry(3571).unwrap(), Ff12::BusEq);
        assert_eq!(ff12_industry(6021).unwrap(), Ff12::Money);
        assert_eq!(ff12_industry(9999).unwrap(), Ff12::Other);
        assert_eq!(ff12_industry(2834).unwrap(), Ff12::Hlth);
        assert_eq!(ff12_industry(3714).unwrap(), Ff12::Durbl);
        assert_eq!(ff12_industry(3715).unwrap(), Ff12::Manuf);
        assert_eq!(ff12_industry(4911).unwrap(), Ff12::Utils);
        assert_eq!(ff12_industry(4950).unwrap(), Ff12::Other);
        assert!(ff12_industry(10000).is_err());
    }

    #[test]
    fn ranges_do_not_overlap() {
        for sic in 0..=9999u32 {
            let hits = RANGES.iter().filter(|(lo, hi, _)| (*lo as u32..=*hi as u32).contains(&sic)).count();
            assert!(hits <= 1, "{sic}");
        }
    }

    #[test]
    fn ids_round_trip() {
        for f in Ff12::ALL {
            assert_eq!(Ff12::from_id(f.id()), Some(f));
        }
        assert_eq!(Ff12::from_id(0), None);
        assert_eq!(Ff12::from_id(13), None);
    }
}
