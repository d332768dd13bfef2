//! Subband energy detection.
//!
//! The monitored band is cut into subbands (by default the four occupied bands
//! interleaved with the five idle gaps). Each recovered spectrum is reduced to
//! its share of total energy per subband, and a subband is declared occupied
//! when its share exceeds a threshold.
//!
//! The energy enhancement ratio compares a candidate method (`E_new`) to a
//! baseline (`E_std`): `(E_new - E_std) / E_std` on active subbands and
//! `(E_std - E_new) / E_std` on idle ones, so positive means better in both
//! cases.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{fmt_f64, write_csv};
use crate::recovery::Method;
use crate::signal::{default_profile, SpectrumProfile};

pub const DEFAULT_THRESHOLD: f64 = 0.05;

/// Subband boundaries (`K + 1` bin edges) and ground-truth activity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub edges: Vec<usize>,
    pub active: Vec<bool>,
}

impl Partition {
    pub fn k(&self) -> usize {
        self.active.len()
    }
}

/// Splits the profile's span at every band edge. Gaps that hold no bin are
/// dropped; a band that holds no bin is an error.
pub fn partition_for_profile(profile: &SpectrumProfile) -> Result<Partition> {
    let n = profile.grid_size;
    let mut bands: Vec<_> = profile.bands.iter().collect();
    bands.sort_by(|a, b| a.f_start.total_cmp(&b.f_start));
    let mut edges = vec![0usize];
    let mut active = Vec::new();
    let mut push = |end: usize, is_band: bool, edges: &mut Vec<usize>| -> Result<()> {
        let start = *edges.last().unwrap();
        if end > start {
            edges.push(end);
            active.push(is_band);
        } else if is_band {
            return Err(Error::config("a band is narrower than one frequency bin"));
        }
        Ok(())
    };
    for band in bands {
        let range = profile.band_bins(band);
        push(range.start, false, &mut edges)?;
        push(range.end, true, &mut edges)?;
    }
    push(n, false, &mut edges)?;
    Ok(Partition { edges, active })
}

/// The nine-subband partition of the default 0-500 MHz layout on an `n`-bin grid.
pub fn default_partition(n: usize) -> Result<Partition> {
    if n < 9 {
        return Err(Error::dimension(format!("need at least 9 bins, got {n}")));
    }
    let mut profile = default_profile();
    profile.grid_size = n;
    partition_for_profile(&profile)
}

fn check_edges(edges: &[usize], n: usize) -> Result<()> {
    if edges.len() < 2 || edges[0] != 0 || *edges.last().unwrap() != n {
        return Err(Error::dimension(format!(
            "edges must run from 0 to {n}, got {edges:?}"
        )));
    }
    if edges.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::dimension("edges must be non-decreasing"));
    }
    Ok(())
}

/// Share of `sum |r_k|^2` falling in each subband. Empty subbands get 0.
pub fn subband_energies(r_hat: &[Complex64], edges: &[usize]) -> Result<Vec<f64>> {
    check_edges(edges, r_hat.len())?;
    let raw: Vec<f64> = edges
        .windows(2)
        .map(|w| r_hat[w[0]..w[1]].iter().map(|z| z.norm_sqr()).sum())
        .collect();
    let total: f64 = raw.iter().sum();
    if total == 0.0 || !total.is_finite() {
        return Err(Error::ZeroEnergy);
    }
    Ok(raw.into_iter().map(|e| e / total).collect())
}

/// Per-subband enhancement ratio of `e_new` over the baseline `e_std`.
/// `None` where the baseline energy is zero.
pub fn eer(e_new: &[f64], e_std: &[f64], active_mask: &[bool]) -> Result<Vec<Option<f64>>> {
    if e_new.len() != e_std.len() || e_new.len() != active_mask.len() {
        return Err(Error::dimension(format!(
            "energy vectors of length {} and {} with a mask of length {}",
            e_new.len(),
            e_std.len(),
            active_mask.len()
        )));
    }
    Ok(e_new
        .iter()
        .zip(e_std)
        .zip(active_mask)
        .map(|((&n, &s), &active)| {
            if s == 0.0 {
                None
            } else if active {
                Some((n - s) / s)
            } else {
                Some((s - n) / s)
            }
        })
        .collect())
}

/// `energies_k > threshold`.
pub fn detect(energies: &[f64], threshold: f64) -> Result<Vec<bool>> {
    if !(threshold >= 0.0) {
        return Err(Error::config(format!("threshold must be >= 0, got {threshold}")));
    }
    Ok(energies.iter().map(|&e| e > threshold).collect())
}

/// Energies and decisions of every method on one capture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubbandReport {
    pub edges: Vec<usize>,
    pub active_mask: Vec<bool>,
    pub threshold: f64,
    pub energies: BTreeMap<Method, Vec<f64>>,
    pub decisions: BTreeMap<Method, Vec<bool>>,
    /// Distortion-aware program against constrained LASSO, when both ran.
    pub eer: Option<Vec<Option<f64>>>,
}

impl SubbandReport {
    pub fn k(&self) -> usize {
        self.active_mask.len()
    }

    pub fn build(
        partition: &Partition,
        spectra: &[(Method, &[Complex64])],
        threshold: f64,
    ) -> Result<Self> {
        if partition.edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::dimension("report edges must be strictly increasing"));
        }
        let mut energies = BTreeMap::new();
        let mut decisions = BTreeMap::new();
        for (method, r) in spectra {
            let e = subband_energies(r, &partition.edges)?;
            decisions.insert(*method, detect(&e, threshold)?);
            energies.insert(*method, e);
        }
        let eer = match (energies.get(&Method::Asd), energies.get(&Method::Lasso)) {
            (Some(new), Some(std)) => Some(eer(new, std, &partition.active)?),
            _ => None,
        };
        Ok(Self {
            edges: partition.edges.clone(),
            active_mask: partition.active.clone(),
            threshold,
            energies,
            decisions,
            eer,
        })
    }

    /// True when `method`'s decisions equal the ground-truth mask.
    pub fn exact_detection(&self, method: Method) -> Option<bool> {
        self.decisions.get(&method).map(|d| d == &self.active_mask)
    }
}

/// One row per method (energies) plus an `eer` row, columns `1..=K`.
pub fn write_energy_table(
    path: &Path,
    energies: &BTreeMap<Method, Vec<f64>>,
    eer: Option<&[Option<f64>]>,
) -> Result<()> {
    let k = energies
        .values()
        .next()
        .map(Vec::len)
        .or(eer.map(<[_]>::len))
        .unwrap_or(0);
    let mut header = vec!["row".to_string()];
    header.extend((1..=k).map(|i| i.to_string()));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();

    // baseline first, as in the usual comparison layout
    let order = [Method::Lasso, Method::Asd, Method::Bp];
    let mut rows: Vec<Vec<String>> = order
        .iter()
        .filter_map(|m| energies.get(m).map(|e| (m, e)))
        .map(|(m, e)| {
            let mut row = vec![m.name().to_string()];
            row.extend(e.iter().map(|v| fmt_f64(*v)));
            row
        })
        .collect();
    if let Some(eer) = eer {
        let mut row = vec!["eer".to_string()];
        row.extend(eer.iter().map(|v| v.map(fmt_f64).unwrap_or_default()));
        rows.push(row);
    }
    write_csv(path, &header_refs, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LASSO_ROW: [f64; 9] = [0.0298, 0.1601, 0.0335, 0.1854, 0.0985, 0.2052, 0.0685, 0.1836, 0.0352];
    const ASD_ROW: [f64; 9] = [0.0036, 0.2918, 0.0000, 0.0990, 0.0002, 0.3552, 0.0013, 0.2484, 0.0006];
    const MASK: [bool; 9] = [false, true, false, true, false, true, false, true, false];

    #[test]
    fn default_partition_layout() {
        let p = default_partition(512).unwrap();
        assert_eq!(p.k(), 9);
        assert_eq!(p.edges, vec![0, 31, 72, 123, 184, 307, 348, 430, 471, 512]);
        assert_eq!(p.active, MASK.to_vec());
        let profile = default_profile();
        let occ = profile.occupancy();
        for (k, w) in p.edges.windows(2).enumerate() {
            assert!(occ[w[0]..w[1]].iter().all(|&o| o == p.active[k]));
        }
        let small = default_partition(64).unwrap();
        assert_eq!(small.edges.first(), Some(&0));
        assert_eq!(small.edges.last(), Some(&64));
        assert!(default_partition(8).is_err());
    }

    #[test]
    fn single_bin_energy_is_indicator() {
        let mut r = vec![Complex64::new(0.0, 0.0); 12];
        r[7] = Complex64::new(0.0, -3.0);
        let e = subband_energies(&r, &[0, 4, 8, 12]).unwrap();
        assert_eq!(e, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn flat_spectrum_is_uniform() {
        let r = vec![Complex64::new(1.0, 1.0); 12];
        let e = subband_energies(&r, &[0, 3, 6, 9, 12]).unwrap();
        assert!(e.iter().all(|v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn empty_subband_and_zero_spectrum() {
        let r = vec![Complex64::new(1.0, 0.0); 4];
        assert_eq!(subband_energies(&r, &[0, 2, 2, 4]).unwrap(), vec![0.5, 0.0, 0.5]);
        let z = vec![Complex64::new(0.0, 0.0); 4];
        assert!(matches!(subband_energies(&z, &[0, 4]), Err(Error::ZeroEnergy)));
        assert!(subband_energies(&r, &[0, 3]).is_err());
    }

    #[test]
    fn printed_rows_are_normalized_to_rounding() {
        let s: f64 = LASSO_ROW.iter().sum();
        assert!((s - 0.9998).abs() < 1e-12);
    }

    #[test]
    fn eer_matches_printed_idle_subbands() {
        let e = eer(&ASD_ROW, &LASSO_ROW, &MASK).unwrap();
        assert!((e[0].unwrap() - 0.8792).abs() < 5e-5);
        assert_eq!(e[2], Some(1.0));
    }

    #[test]
    fn eer_identity_and_sentinel() {
        let e = eer(&LASSO_ROW, &LASSO_ROW, &MASK).unwrap();
        assert!(e.iter().all(|v| *v == Some(0.0)));
        let e = eer(&[0.5, 0.5], &[0.0, 1.0], &[true, false]).unwrap();
        assert_eq!(e, vec![None, Some(0.5)]);
        assert!(eer(&[0.5], &[0.5, 0.5], &[true]).is_err());
    }

    #[test]
    fn threshold_detection() {
        assert_eq!(detect(&ASD_ROW, 0.05).unwrap(), MASK.to_vec());
        assert_eq!(detect(&[0.0, 0.2, 0.8], 0.0).unwrap(), vec![false, true, true]);
        assert_eq!(detect(&[0.25; 4], 0.25).unwrap(), vec![false; 4]);
        assert!(detect(&[0.1], -1.0).is_err());
    }

    #[test]
    fn report_normalizes_each_method() {
        let p = default_partition(64).unwrap();
        let a: Vec<Complex64> = (0..64).map(|k| Complex64::new(k as f64, 1.0)).collect();
        let b: Vec<Complex64> = (0..64).map(|k| Complex64::new(1.0, (k % 5) as f64)).collect();
        let rep = SubbandReport::build(&p, &[(Method::Lasso, &a), (Method::Asd, &b)], 0.05).unwrap();
        for e in rep.energies.values() {
            assert!((e.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
        assert_eq!(rep.eer.as_ref().unwrap().len(), 9);
    }
}
