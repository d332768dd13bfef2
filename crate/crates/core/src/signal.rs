//! Ground-truth wideband spectra and their Nyquist-rate time signals.
//!
//! A [`SpectrumProfile`] describes the monitored band: which sub-ranges carry
//! primary users, how strong they are, and the level of the idle noise floor.
//! [`synthesize_spectrum`] turns a profile into a complex per-bin spectrum and
//! [`spectrum_to_time`] maps it through the unitary inverse DFT.

use std::f64::consts::TAU;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::io::{fmt_f64, write_csv};
use crate::rng::{stream, stream_rng};

const MHZ: f64 = 1.0e6;

/// Closed interval `[low, high]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub const fn new(low: f64, high: f64) -> Self {
        Self { low, high }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.low && v <= self.high
    }

    fn is_valid_nonneg(&self) -> bool {
        self.low.is_finite() && self.high.is_finite() && self.low >= 0.0 && self.low <= self.high
    }
}

/// One occupied band of the monitored range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSpec {
    /// Lower edge, Hz.
    pub f_start: f64,
    /// Upper edge, Hz.
    pub f_stop: f64,
    /// Per-bin magnitude interval inside the band.
    pub psd_range: Interval,
}

/// How idle bins draw their magnitude from `noise_floor_range`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseFloorModel {
    /// `low + |N(0, (high - low) / 3)|`, clipped at `high`.
    #[default]
    HalfGaussian,
    Uniform,
}

/// Phase assignment for synthesized bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhasePolicy {
    /// Independent uniform phase on `[0, 2 pi)` per bin.
    #[default]
    Random,
    /// Real, non-negative spectrum.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumProfile {
    pub grid_size: usize,
    pub freq_span: Interval,
    pub bands: Vec<BandSpec>,
    pub noise_floor_range: Interval,
    /// Signal-to-noise ratio of the additive channel noise; `inf` disables it.
    #[serde(with = "crate::io::extended_f64")]
    pub snr_db: f64,
    #[serde(default)]
    pub noise_floor_model: NoiseFloorModel,
    #[serde(default)]
    pub phase_policy: PhasePolicy,
}

/// The monitored band used throughout the experiments: 0-500 MHz with four
/// primary users and a noise floor up to 10.
pub fn default_profile() -> SpectrumProfile {
    let band = |lo: f64, hi: f64, p_lo: f64, p_hi: f64| BandSpec {
        f_start: lo * MHZ,
        f_stop: hi * MHZ,
        psd_range: Interval::new(p_lo, p_hi),
    };
    SpectrumProfile {
        grid_size: 512,
        freq_span: Interval::new(0.0, 500.0 * MHZ),
        bands: vec![
            band(30.0, 70.0, 100.0, 140.0),
            band(120.0, 180.0, 70.0, 110.0),
            band(300.0, 340.0, 130.0, 170.0),
            band(420.0, 460.0, 110.0, 150.0),
        ],
        noise_floor_range: Interval::new(0.0, 10.0),
        snr_db: 13.0,
        noise_floor_model: NoiseFloorModel::HalfGaussian,
        phase_policy: PhasePolicy::Random,
    }
}

impl SpectrumProfile {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let profile: Self = crate::io::read_toml(path)?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.grid_size;
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::config(format!(
                "grid_size must be a power of two >= 2, got {n}"
            )));
        }
        let span = self.freq_span;
        if !(span.low.is_finite() && span.high.is_finite() && span.low < span.high) {
            return Err(Error::config("freq_span must satisfy low < high"));
        }
        if !self.noise_floor_range.is_valid_nonneg() {
            return Err(Error::config(
                "noise_floor_range must be a non-negative interval with low <= high",
            ));
        }
        if self.snr_db.is_nan() || self.snr_db == f64::NEG_INFINITY {
            return Err(Error::config("snr_db must be a number or +inf"));
        }
        let mut sorted: Vec<&BandSpec> = self.bands.iter().collect();
        sorted.sort_by(|a, b| a.f_start.total_cmp(&b.f_start));
        for (i, b) in sorted.iter().enumerate() {
            if !(b.f_start < b.f_stop) {
                return Err(Error::config(format!(
                    "band {}..{} Hz: f_start must be below f_stop",
                    b.f_start, b.f_stop
                )));
            }
            if b.f_start < span.low || b.f_stop > span.high {
                return Err(Error::config(format!(
                    "band {}..{} Hz lies outside the monitored span",
                    b.f_start, b.f_stop
                )));
            }
            if !b.psd_range.is_valid_nonneg() {
                return Err(Error::config(format!(
                    "band {}..{} Hz: psd_range must be a non-negative interval",
                    b.f_start, b.f_stop
                )));
            }
            if i > 0 && sorted[i - 1].f_stop > b.f_start {
                return Err(Error::config("bands overlap"));
            }
        }
        Ok(())
    }

    pub fn bin_width(&self) -> f64 {
        (self.freq_span.high - self.freq_span.low) / self.grid_size as f64
    }

    /// Center frequency of bin `k`, which covers `[k, k+1) * bin_width`.
    pub fn bin_center(&self, k: usize) -> f64 {
        self.freq_span.low + (k as f64 + 0.5) * self.bin_width()
    }

    /// First bin whose center is at or above `freq`.
    pub fn bin_edge(&self, freq: f64) -> usize {
        let pos = (freq - self.freq_span.low) / self.bin_width() - 0.5;
        (pos.ceil().max(0.0) as usize).min(self.grid_size)
    }

    /// Bins claimed by a band: every bin whose center lies in `[f_start, f_stop)`.
    pub fn band_bins(&self, band: &BandSpec) -> std::ops::Range<usize> {
        self.bin_edge(band.f_start)..self.bin_edge(band.f_stop)
    }

    /// Ground-truth occupancy, a function of band edges and grid only.
    pub fn occupancy(&self) -> Vec<bool> {
        let mut mask = vec![false; self.grid_size];
        for band in &self.bands {
            for k in self.band_bins(band) {
                mask[k] = true;
            }
        }
        mask
    }

    /// Nyquist rate of the complex baseband grid.
    pub fn sample_rate(&self) -> f64 {
        self.freq_span.high - self.freq_span.low
    }
}

/// Complex per-bin spectrum with its ground-truth occupancy.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySpectrum {
    pub r: Vec<Complex64>,
    pub occupancy: Vec<bool>,
}

impl FrequencySpectrum {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.r.iter().map(|z| z.norm()).collect()
    }
}

/// Nyquist-rate complex samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSignal {
    pub x: Vec<Complex64>,
    pub sample_rate: f64,
}

impl TimeSignal {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.x.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Draws a spectrum from `profile`. Active bins take a magnitude uniform in
/// their band's `psd_range`; idle bins follow the noise-floor model.
pub fn synthesize_spectrum(profile: &SpectrumProfile, rng_seed: u64) -> Result<FrequencySpectrum> {
    profile.validate()?;
    let n = profile.grid_size;
    let mut range_of: Vec<Option<Interval>> = vec![None; n];
    for band in &profile.bands {
        for k in profile.band_bins(band) {
            range_of[k] = Some(band.psd_range);
        }
    }

    let floor = profile.noise_floor_range;
    let floor_sigma = (floor.high - floor.low) / 3.0;
    let mut rng = stream_rng(rng_seed, stream::SPECTRUM);
    let mut r = Vec::with_capacity(n);
    let mut occupancy = Vec::with_capacity(n);
    for slot in &range_of {
        let magnitude = match slot {
            Some(iv) => uniform_in(&mut rng, *iv),
            None => match profile.noise_floor_model {
                NoiseFloorModel::Uniform => uniform_in(&mut rng, floor),
                NoiseFloorModel::HalfGaussian => {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    (floor.low + (z * floor_sigma).abs()).min(floor.high)
                }
            },
        };
        let phase = match profile.phase_policy {
            PhasePolicy::Random => rng.random::<f64>() * TAU,
            PhasePolicy::Zero => 0.0,
        };
        r.push(Complex64::from_polar(magnitude, phase));
        occupancy.push(slot.is_some());
    }
    Ok(FrequencySpectrum { r, occupancy })
}

fn uniform_in<R: Rng>(rng: &mut R, iv: Interval) -> f64 {
    if iv.high > iv.low {
        rng.random_range(iv.low..=iv.high)
    } else {
        iv.low
    }
}

/// `x = F_N^{-1} r` under the unitary convention.
pub fn spectrum_to_time(spectrum: &FrequencySpectrum, sample_rate: f64) -> TimeSignal {
    TimeSignal {
        x: fourier::inverse(&spectrum.r),
        sample_rate,
    }
}

/// `r = F_N x`, the inverse of [`spectrum_to_time`].
pub fn time_to_spectrum(signal: &TimeSignal) -> Vec<Complex64> {
    fourier::forward(&signal.x)
}

/// Adds circular complex white Gaussian noise whose expected energy is
/// `||x||^2 / 10^(snr_db / 10)`. `snr_db = +inf` returns `x` unchanged.
pub fn add_awgn(signal: &TimeSignal, snr_db: f64, rng_seed: u64) -> Result<TimeSignal> {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::config(format!("invalid SNR {snr_db} dB")));
    }
    let energy = signal.energy();
    if energy == 0.0 {
        return Err(Error::UndefinedSnr);
    }
    if snr_db == f64::INFINITY {
        return Ok(signal.clone());
    }
    let n = signal.len() as f64;
    let noise_energy = energy / 10f64.powf(snr_db / 10.0);
    // each real component carries half of the per-sample noise power
    let sigma = (noise_energy / n / 2.0).sqrt();
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::config(e.to_string()))?;
    let mut rng = stream_rng(rng_seed, stream::AWGN);
    let x = signal
        .x
        .iter()
        .map(|&v| v + Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
        .collect();
    Ok(TimeSignal {
        x,
        sample_rate: signal.sample_rate,
    })
}

/// Writes `bin_index,freq_hz,re,im,magnitude,occupancy`.
pub fn write_spectrum_csv(
    path: &Path,
    profile: &SpectrumProfile,
    spectrum: &FrequencySpectrum,
) -> Result<()> {
    if spectrum.len() != profile.grid_size {
        return Err(Error::dimension(format!(
            "spectrum has {} bins, profile expects {}",
            spectrum.len(),
            profile.grid_size
        )));
    }
    let rows = spectrum.r.iter().enumerate().map(|(k, z)| {
        vec![
            k.to_string(),
            fmt_f64(profile.bin_center(k)),
            fmt_f64(z.re),
            fmt_f64(z.im),
            fmt_f64(z.norm()),
            spectrum.occupancy[k].to_string(),
        ]
    });
    write_csv(
        path,
        &["bin_index", "freq_hz", "re", "im", "magnitude", "occupancy"],
        rows,
    )
}
