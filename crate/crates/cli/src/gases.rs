//! Common bath gases: molecular mass and empirical hard-sphere radius
//! (half the kinetic diameter), for bath lookups and radius-versus-mass plots.

use std::sync::OnceLock;

use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Gas {
    pub gas: String,
    pub mass_amu: f64,
    /// m
    pub hard_sphere_radius_m: f64,
}

const TABLE: &str = include_str!("../data/gases.csv");

pub fn all() -> &'static [Gas] {
    static GASES: OnceLock<Vec<Gas>> = OnceLock::new();
    GASES.get_or_init(|| {
        csv::Reader::from_reader(TABLE.as_bytes())
            .deserialize()
            .collect::<Result<_, _>>()
            .expect("bundled gas table is well formed")
    })
}

/// Case-insensitive lookup by formula.
pub fn lookup(name: &str) -> Option<&'static Gas> {
    all().iter().find(|g| g.gas.eq_ignore_ascii_case(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_parses() {
        assert_eq!(all().len(), 10);
        assert!(all().iter().all(|g| g.mass_amu > 1.0 && (1e-10..3e-10).contains(&g.hard_sphere_radius_m)));
        assert_eq!(lookup("he").unwrap().mass_amu, 4.0026);
        assert!(lookup("Unobtainium").is_none());
    }
}
