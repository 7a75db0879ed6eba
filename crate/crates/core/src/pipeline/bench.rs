use std::path::PathBuf;
use std::sync::mpsc::{self, RecvTimeoutError, Sender};
use std::thread::{self, JoinHandle};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{parse_path, DocumentFailure, PipelineConfig};
use crate::error::{Error, Result};

/// Energy in watt-hours: load fraction × hours × rated power.
pub fn compute_cpu_energy(load_fraction: f64, hours: f64, power_watts: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&load_fraction) {
        return Err(Error::Domain(format!("load fraction {load_fraction} is outside [0, 1]")));
    }
    if !(hours >= 0.0) || !hours.is_finite() {
        return Err(Error::Domain(format!("duration {hours} h must be a finite non-negative number")));
    }
    if !(power_watts > 0.0) || !power_watts.is_finite() {
        return Err(Error::Domain(format!("power {power_watts} W must be positive")));
    }
    Ok(load_fraction * hours * power_watts)
}

/// User plus system CPU time consumed by this process so far.
pub fn process_cpu_seconds() -> f64 {
    // SAFETY: getrusage only writes into the zeroed struct we pass.
    let usage = unsafe {
        let mut u: libc::rusage = std::mem::zeroed();
        libc::getrusage(libc::RUSAGE_SELF, &mut u);
        u
    };
    let tv = |t: libc::timeval| t.tv_sec as f64 + t.tv_usec as f64 / 1e6;
    tv(usage.ru_utime) + tv(usage.ru_stime)
}

/// Samples this process's share of total CPU capacity on a fixed interval.
pub struct CpuSampler {
    stop: Sender<()>,
    handle: JoinHandle<Vec<f64>>,
}

impl CpuSampler {
    pub fn start(interval: Duration) -> Self {
        let (stop, rx) = mpsc::channel::<()>();
        let cores = thread::available_parallelism().map_or(1, |n| n.get()) as f64;
        let handle = thread::spawn(move || {
            let mut samples = Vec::new();
            let mut last = (Instant::now(), process_cpu_seconds());
            loop {
                let done = !matches!(rx.recv_timeout(interval), Err(RecvTimeoutError::Timeout));
                let now = (Instant::now(), process_cpu_seconds());
                let wall = now.0.duration_since(last.0).as_secs_f64();
                if wall > 0.0 {
                    samples.push(((now.1 - last.1) / (wall * cores)).clamp(0.0, 1.0));
                }
                last = now;
                if done {
                    return samples;
                }
            }
        });
        Self { stop, handle }
    }

    /// Stops sampling; the last, partial interval is included.
    pub fn finish(self) -> Vec<f64> {
        let _ = self.stop.send(());
        self.handle.join().unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchDocument {
    pub path: PathBuf,
    pub pages: usize,
    pub parse_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub documents: Vec<BenchDocument>,
    pub failures: Vec<DocumentFailure>,
    pub total_pages: usize,
    pub per_page_mean_ms: f64,
    pub per_page_std_ms: f64,
    pub total_hours: f64,
    /// Mean share of the machine's CPU capacity used by this process.
    pub mean_cpu_load: f64,
    pub cpu_samples: usize,
    pub cpu_power_watts: f64,
    pub cpu_energy_wh: f64,
    pub gpu_energy_wh: f64,
}

impl BenchReport {
    /// Per-page time as `mean ms ± std`.
    pub fn per_page_summary(&self) -> String {
        let digits = if self.per_page_mean_ms >= 10.0 { 0 } else { 2 };
        format!("{:.*} ms ± {:.*}", digits, self.per_page_mean_ms, digits, self.per_page_std_ms)
    }

    /// Whether the stored energy matches load × hours × power.
    pub fn is_self_consistent(&self, rel_tol: f64) -> bool {
        let expected = self.mean_cpu_load * self.total_hours * self.cpu_power_watts;
        let scale = expected.abs().max(self.cpu_energy_wh.abs());
        (self.cpu_energy_wh - expected).abs() <= rel_tol * scale || scale == 0.0
    }
}

/// Parses documents one at a time (chunking excluded), recording each
/// document's time spread evenly over its pages, while sampling CPU load.
pub fn bench_parse(inputs: &[PathBuf], cfg: &PipelineConfig, power_watts: f64) -> Result<BenchReport> {
    compute_cpu_energy(0.0, 0.0, power_watts)?;
    cfg.validate()?;
    let sampler = CpuSampler::start(Duration::from_secs(1));
    let started = Instant::now();
    let mut documents = Vec::new();
    let mut failures = Vec::new();
    for path in inputs {
        let t = Instant::now();
        match parse_path(path, cfg) {
            Ok(parsed) => documents.push(BenchDocument {
                path: path.clone(),
                pages: parsed.page_count,
                parse_ms: t.elapsed().as_secs_f64() * 1e3,
            }),
            Err(e) => {
                log::error!("{}: {e}", path.display());
                failures.push(DocumentFailure { path: path.clone(), error: e.to_string() });
            }
        }
    }
    let total_hours = started.elapsed().as_secs_f64() / 3600.0;
    let samples = sampler.finish();
    let mean_cpu_load =
        if samples.is_empty() { 0.0 } else { samples.iter().sum::<f64>() / samples.len() as f64 };

    let per_page: Vec<f64> = documents
        .iter()
        .filter(|d| d.pages > 0)
        .flat_map(|d| std::iter::repeat_n(d.parse_ms / d.pages as f64, d.pages))
        .collect();
    let total_pages = per_page.len();
    let (mean, std) = if per_page.is_empty() {
        (0.0, 0.0)
    } else {
        let n = total_pages as f64;
        let total_ms: f64 = documents.iter().filter(|d| d.pages > 0).map(|d| d.parse_ms).sum();
        let mean = total_ms / n;
        let var = per_page.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        (mean, var.sqrt())
    };
    Ok(BenchReport {
        documents,
        failures,
        total_pages,
        per_page_mean_ms: mean,
        per_page_std_ms: std,
        total_hours,
        mean_cpu_load,
        cpu_samples: samples.len(),
        cpu_power_watts: power_watts,
        cpu_energy_wh: compute_cpu_energy(mean_cpu_load, total_hours, power_watts)?,
        gpu_energy_wh: 0.0,
    })
}
