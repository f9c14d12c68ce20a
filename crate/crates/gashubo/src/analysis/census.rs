//! Gate-count accounting for the state preparation operator.
//!
//! Each polynomial term costs one phase ladder of `m` (controlled) phase
//! gates, so the census of a generated circuit is determined by how many
//! terms of each degree survive the expansion. The closed-form predictions
//! count the monomials a generic channel produces per modulation; a
//! measured census below prediction signals a coefficient that cancelled
//! numerically, one above it a genuine structural mismatch.

use std::collections::BTreeMap;
use std::io::{self, Write};

use super::AnalysisError;
use crate::mimo::{build_mld_hubo, MimoInstance, Modulation};
use crate::quantum::PreparedCircuit;
use crate::Scalar;

/// Gate counts for one application of the state preparation operator.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GateCensus {
    pub hadamard: u64,
    /// Uncontrolled phase gates (the constant term's ladder).
    pub phase: u64,
    /// `controls -> count` for multi-controlled phase gates; zero entries
    /// are not stored.
    pub controlled_phase: BTreeMap<usize, u64>,
    pub iqft: u64,
}

impl GateCensus {
    pub fn controlled(&self, controls: usize) -> u64 {
        self.controlled_phase.get(&controls).copied().unwrap_or(0)
    }

    fn add_controlled(&mut self, controls: usize, count: u64) {
        if count > 0 {
            *self.controlled_phase.entry(controls).or_insert(0) += count;
        }
    }

    /// Largest control count present.
    pub fn max_controls(&self) -> usize {
        self.controlled_phase.keys().max().copied().unwrap_or(0)
    }

    /// `(label, count)` rows in display order: H, R, 1-CR.., IQFT.
    pub fn rows(&self) -> Vec<(String, u64)> {
        let mut rows = vec![
            ("H".to_string(), self.hadamard),
            ("R".to_string(), self.phase),
        ];
        for (&c, &count) in &self.controlled_phase {
            rows.push((format!("{c}-CR"), count));
        }
        rows.push(("IQFT".to_string(), self.iqft));
        rows
    }

    /// True when every gate class in `self` is counted at most as often as
    /// in `other`.
    pub fn dominated_by(&self, other: &GateCensus) -> bool {
        self.hadamard <= other.hadamard
            && self.phase <= other.phase
            && self.iqft <= other.iqft
            && self
                .controlled_phase
                .iter()
                .all(|(&c, &count)| count <= other.controlled(c))
    }

    /// Rough elementary-gate cost of the controlled-phase ladders after
    /// decomposition: a phase gate with `c` controls costs O(c) elementary
    /// gates.
    pub fn elementary_controlled_estimate(&self) -> u64 {
        self.controlled_phase
            .iter()
            .map(|(&c, &count)| c as u64 * count)
            .sum()
    }

    fn scaled(&self, factor: u64) -> GateCensus {
        GateCensus {
            hadamard: self.hadamard * factor,
            phase: self.phase * factor,
            controlled_phase: self
                .controlled_phase
                .iter()
                .map(|(&c, &count)| (c, count * factor))
                .collect(),
            iqft: self.iqft * factor,
        }
    }
}

/// Counts the gates a prepared circuit emits: `n + m` Hadamards, `m` phase
/// gates per term ladder (controlled by the term's degree), one inverse
/// Fourier transform.
pub fn census_circuit<T: Scalar>(circ: &PreparedCircuit<T>) -> GateCensus {
    let m = circ.m() as u64;
    let mut census = GateCensus {
        hadamard: (circ.n() + circ.m()) as u64,
        phase: 0,
        controlled_phase: BTreeMap::new(),
        iqft: 1,
    };
    for rotation in circ.rotations() {
        let controls = rotation.controls.degree();
        if controls == 0 {
            census.phase += m;
        } else {
            census.add_controlled(controls, m);
        }
    }
    census
}

/// Closed-form gate counts for a generic channel, per modulation.
/// `n` must be a positive multiple of the modulation's bits per symbol.
pub fn predicted_census(
    modulation: Modulation,
    n: usize,
    m: usize,
) -> Result<GateCensus, AnalysisError> {
    let bps = modulation.bits_per_symbol();
    if n == 0 || !n.is_multiple_of(bps) {
        return Err(AnalysisError::InconsistentBitCount { modulation, n });
    }
    let (n, m) = (n as u64, m as u64);
    let mut census = GateCensus {
        hadamard: n + m,
        phase: m,
        controlled_phase: BTreeMap::new(),
        iqft: 1,
    };
    census.add_controlled(1, n * m);
    match modulation {
        Modulation::Bpsk => {
            census.add_controlled(2, n * (n - 1) * m / 2);
        }
        Modulation::Qpsk => {
            census.add_controlled(2, n * (n - 2) * m / 2);
        }
        Modulation::Qam16 => {
            census.add_controlled(2, n * (n - 3) * m / 2);
            census.add_controlled(3, n * (n - 4) * m / 2);
            census.add_controlled(4, n * (n - 4) * m / 8);
        }
        Modulation::Qam64 => {
            census.add_controlled(2, n * (n - 4) * m / 2);
            census.add_controlled(3, n * (n - 6) * m + n * m / 3);
            census.add_controlled(4, 5 * n * (n - 6) * m / 6);
            census.add_controlled(5, n * (n - 6) * m / 3);
            census.add_controlled(6, n * (n - 6) * m / 18);
        }
    }
    Ok(census)
}

/// Outcome of comparing a generated circuit against the prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusOutcome {
    Match,
    /// Fewer gates than predicted: some coefficient cancelled numerically
    /// (expected only on non-generic channels).
    CancellationFlagged,
    /// More gates than predicted in some class: a structural discrepancy.
    Mismatch,
}

/// Comparison report for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub predicted: GateCensus,
    pub measured: GateCensus,
    pub outcome: CensusOutcome,
    /// Value-register width the circuit was prepared with.
    pub m: usize,
}

/// Builds the detection polynomial for the instance, prepares the circuit
/// at threshold zero, and checks its census against the prediction.
pub fn verify_census<T: Scalar>(
    inst: &MimoInstance<T>,
    m: usize,
) -> Result<CensusReport, AnalysisError> {
    let poly = build_mld_hubo(inst);
    let circ = PreparedCircuit::prepare(&poly, T::zero(), m)?;
    let measured = census_circuit(&circ);
    let predicted = predicted_census(inst.modulation, inst.n(), m)?;
    let outcome = if measured == predicted {
        CensusOutcome::Match
    } else if measured.dominated_by(&predicted) {
        CensusOutcome::CancellationFlagged
    } else {
        CensusOutcome::Mismatch
    };
    Ok(CensusReport {
        predicted,
        measured,
        outcome,
        m,
    })
}

/// Gate totals for the full `G^L A_y` circuit: `(2L+1)` copies of the
/// state-preparation census plus `L` oracle Z gates and `L` diffusion
/// blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct FullGateTotals {
    pub preparation: GateCensus,
    pub oracle_z: u64,
    pub diffusion_blocks: u64,
}

pub fn full_circuit_gate_totals(census: &GateCensus, grover_applications: u64) -> FullGateTotals {
    FullGateTotals {
        preparation: census.scaled(2 * grover_applications + 1),
        oracle_z: grover_applications,
        diffusion_blocks: grover_applications,
    }
}

/// Writes `gate,predicted,measured` rows.
pub fn write_gates_csv<W: Write>(
    report: &CensusReport,
    mut w: W,
    comment: Option<&str>,
) -> io::Result<()> {
    if let Some(c) = comment {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "gate,predicted,measured")?;
    let measured: BTreeMap<String, u64> = report.measured.rows().into_iter().collect();
    for (label, predicted) in report.predicted.rows() {
        let got = measured.get(&label).copied().unwrap_or(0);
        writeln!(w, "{label},{predicted},{got}")?;
    }
    // derived elementary-gate figures (O(c) per c-controlled phase gate,
    // O(m^2) per inverse Fourier transform)
    writeln!(
        w,
        "# elementary estimate: controlled-phase ~{}, iqft ~{}",
        report.measured.elementary_controlled_estimate(),
        report.measured.iqft * (report.m * report.m) as u64
    )?;
    Ok(())
}
