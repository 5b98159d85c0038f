//! Exhaustive valency sweeps over unit-orbit representatives.

use serde::Serialize;

use super::{predicate_for, CiVerdict, Engine};
use crate::cayley::{ConnectionSet, Mode};
use crate::error::{Error, Result};
use crate::zn::{check_modulus, units};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub set: ConnectionSet,
    pub witness: ConnectionSet,
}

/// Outcome of an m-property or m-group computation for one `(n, m, mode)` cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub n: u64,
    pub m: usize,
    pub mode: Mode,
    #[serde(rename = "property")]
    pub property_holds: bool,
    /// Smallest valency without the CI property (m-group reports only).
    pub failing_valency: Option<usize>,
    /// Closed-form prediction, when one is stated for this `m`.
    #[serde(rename = "predicate")]
    pub predicate_value: Option<bool>,
    #[serde(rename = "agree")]
    pub agreement: Option<bool>,
    pub counterexamples: Vec<Counterexample>,
}

impl ClassificationReport {
    pub fn agrees(&self) -> bool {
        self.agreement != Some(false)
    }
}

/// Every size-`m` connection set (inverse-closed in graph mode) that is the
/// lexicographically least member of its unit orbit, in lexicographic order.
pub fn orbit_representatives(n: u64, m: usize, mode: Mode) -> Result<Vec<ConnectionSet>> {
    check_modulus(n)?;
    let units = units(n)?;
    // building blocks: singletons in digraph mode, {x, -x} pairs in graph mode
    let blocks: Vec<Vec<u64>> = match mode {
        Mode::Digraph => (1..n).map(|x| vec![x]).collect(),
        Mode::Graph => (1..n)
            .filter(|&x| 2 * x <= n)
            .map(|x| if 2 * x == n { vec![x] } else { vec![x, n - x] })
            .collect(),
    };
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    choose(&blocks, 0, m, &mut chosen, &mut |members| {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let is_least = units.iter().all(|&u| {
            let mut image: Vec<u64> = sorted.iter().map(|&s| s * u % n).collect();
            image.sort_unstable();
            image >= sorted
        });
        if is_least {
            out.push(ConnectionSet::new(n, sorted, mode).expect("valid by construction"));
        }
    });
    out.sort();
    Ok(out)
}

fn choose(
    blocks: &[Vec<u64>],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]),
) {
    if remaining == 0 {
        visit(chosen);
        return;
    }
    for i in start..blocks.len() {
        let block = &blocks[i];
        if block.len() > remaining {
            continue;
        }
        chosen.extend_from_slice(block);
        choose(blocks, i + 1, remaining - block.len(), chosen, visit);
        chosen.truncate(chosen.len() - block.len());
    }
}

impl Engine {
    fn decide_all(&self, sets: &[ConnectionSet]) -> Result<Vec<CiVerdict>> {
        #[cfg(feature = "parallel")]
        if self.config.workers > 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.config.workers)
                .build()
                .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?;
            return pool.install(|| sets.par_iter().map(|s| self.decide_ci(s)).collect());
        }
        sets.iter().map(|s| self.decide_ci(s)).collect()
    }

    /// Whether every Cayley (di)graph of valency exactly `m` on `Z_n` is CI.
    pub fn m_property(&self, n: u64, m: usize, mode: Mode) -> Result<ClassificationReport> {
        check_modulus(n)?;
        let max = (n - 1) as usize;
        if m == 0 || m > max {
            return Err(Error::ValencyRange { m, max });
        }
        let reps = orbit_representatives(n, m, mode)?;
        let verdicts = self.decide_all(&reps)?;
        let counterexamples: Vec<Counterexample> = reps
            .into_iter()
            .zip(verdicts)
            .filter_map(|(set, v)| v.witness.map(|witness| Counterexample { set, witness }))
            .collect();
        Ok(ClassificationReport {
            n,
            m,
            mode,
            property_holds: counterexamples.is_empty(),
            failing_valency: None,
            predicate_value: None,
            agreement: None,
            counterexamples,
        })
    }

    /// Whether `Z_n` has the i-(D)CI property for every `i ≤ m`. Valencies
    /// above `n − 1` do not occur and hold vacuously.
    pub fn is_m_group(&self, n: u64, m: usize, mode: Mode) -> Result<ClassificationReport> {
        check_modulus(n)?;
        if m == 0 {
            return Err(Error::ValencyRange {
                m,
                max: (n - 1) as usize,
            });
        }
        let top = m.min((n - 1) as usize);
        let mut failure = None;
        for i in 1..=top {
            let report = self.m_property(n, i, mode)?;
            if !report.property_holds {
                failure = Some(report);
                break;
            }
        }
        Ok(group_report(n, m, mode, failure))
    }

    /// Compares the exhaustive m-group status with the closed-form predicate
    /// for every `2 ≤ n ≤ n_max` and every `m ≤ m_max` where a predicate is
    /// stated (`m ≥ 3` for digraphs, `m ≥ 6` for graphs).
    pub fn verify_theorems(&self, n_max: u64, m_max: usize, mode: Mode) -> Result<Vec<ClassificationReport>> {
        let m_min = match mode {
            Mode::Digraph => 3,
            Mode::Graph => 6,
        };
        let mut reports = Vec::new();
        for n in 2..=n_max {
            if m_min > m_max {
                break;
            }
            // one pass over valencies, shared by every m of this row
            let top = m_max.min((n - 1) as usize);
            let mut first_failure: Option<ClassificationReport> = None;
            for i in 1..=top {
                let report = self.m_property(n, i, mode)?;
                if !report.property_holds {
                    first_failure = Some(report);
                    break;
                }
            }
            for m in m_min..=m_max {
                let failure = first_failure.as_ref().filter(|f| f.m <= m).cloned();
                reports.push(group_report(n, m, mode, failure));
            }
        }
        Ok(reports)
    }

    /// Whether every Cayley (di)graph on `Z_n` is CI, checked over all valencies.
    pub fn is_whole_group(&self, n: u64, mode: Mode) -> Result<ClassificationReport> {
        let mut report = self.is_m_group(n, (n - 1) as usize, mode)?;
        let predicate = match mode {
            Mode::Digraph => super::predicate_dci_group(n),
            Mode::Graph => super::predicate_ci_group(n),
        };
        report.predicate_value = Some(predicate);
        report.agreement = Some(predicate == report.property_holds);
        Ok(report)
    }
}

fn group_report(n: u64, m: usize, mode: Mode, failure: Option<ClassificationReport>) -> ClassificationReport {
    let property_holds = failure.is_none();
    let predicate_value = predicate_for(n, m, mode);
    ClassificationReport {
        n,
        m,
        mode,
        property_holds,
        failing_valency: failure.as_ref().map(|f| f.m),
        predicate_value,
        agreement: predicate_value.map(|p| p == property_holds),
        counterexamples: failure.map(|f| f.counterexamples).unwrap_or_default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representatives() {
        let reps = orbit_representatives(8, 3, Mode::Digraph).unwrap();
        assert!(reps.iter().any(|s| s.members() == [1, 2, 5]));
        assert!(reps.iter().all(|s| s.len() == 3));
        // brute-force count of orbits of 3-subsets of Z_8 ∖ {0} under {1,3,5,7}
        let mut seen = std::collections::BTreeSet::new();
        for a in 1..8u64 {
            for b in a + 1..8 {
                for c in b + 1..8 {
                    let least = [1u64, 3, 5, 7]
                        .iter()
                        .map(|u| {
                            let mut v = vec![a * u % 8, b * u % 8, c * u % 8];
                            v.sort_unstable();
                            v
                        })
                        .min()
                        .unwrap();
                    seen.insert(least);
                }
            }
        }
        assert_eq!(reps.len(), seen.len());

        let graphs = orbit_representatives(8, 3, Mode::Graph).unwrap();
        assert!(graphs.iter().all(|s| s.is_inverse_closed() && s.contains(4)));
        assert!(orbit_representatives(8, 8, Mode::Digraph).unwrap().is_empty());
    }

    #[test]
    fn valency_examples() {
        let e = Engine::default();
        let r = e.m_property(8, 3, Mode::Digraph).unwrap();
        assert!(!r.property_holds);
        assert!(r.counterexamples.iter().any(|c| c.set.members() == [1, 2, 5]));
        assert!(e.m_property(8, 3, Mode::Graph).unwrap().property_holds);
        let r = e.m_property(9, 4, Mode::Digraph).unwrap();
        assert!(!r.property_holds);
        assert!(r.counterexamples.iter().any(|c| c.set.members() == [1, 3, 4, 7]));
        assert!(matches!(
            e.m_property(8, 8, Mode::Digraph),
            Err(Error::ValencyRange { .. })
        ));
        assert!(matches!(
            e.m_property(8, 0, Mode::Digraph),
            Err(Error::ValencyRange { .. })
        ));
    }

    #[test]
    fn group_examples() {
        let e = Engine::default();
        let r = e.is_m_group(9, 3, Mode::Digraph).unwrap();
        assert!(r.property_holds && r.agreement == Some(true));
        let r = e.is_m_group(9, 4, Mode::Digraph).unwrap();
        assert!(!r.property_holds);
        assert_eq!(r.failing_valency, Some(4));
        assert_eq!(r.agreement, Some(true));
        for m in 1..=17 {
            assert!(
                e.is_m_group(18, m, Mode::Graph).unwrap().property_holds,
                "m = {m}"
            );
        }
        let r = e.is_m_group(8, 2, Mode::Digraph).unwrap();
        assert!(r.property_holds && r.predicate_value.is_none() && r.agreement.is_none());
    }

    #[test]
    fn small_sweeps() {
        let e = Engine::default();
        let reports = e.verify_theorems(12, 7, Mode::Graph).unwrap();
        assert_eq!(reports.len(), 11 * 2);
        assert!(reports.iter().all(|r| r.m >= 6 && r.agreement == Some(true)));
        let rows = e.verify_theorems(8, 7, Mode::Digraph).unwrap();
        let n8: Vec<bool> = rows
            .iter()
            .filter(|r| r.n == 8)
            .map(|r| r.property_holds)
            .collect();
        assert_eq!(n8, vec![false; 5]);
    }

    #[test]
    fn parallel_matches_serial() {
        let serial = Engine::default();
        let parallel = Engine::new(super::super::EngineConfig {
            workers: 4,
            ..Default::default()
        });
        for (n, m) in [(12, 4), (16, 3), (9, 4)] {
            assert_eq!(
                serial.m_property(n, m, Mode::Digraph).unwrap(),
                parallel.m_property(n, m, Mode::Digraph).unwrap()
            );
        }
    }
}
