use rayon::prelude::*;

use super::{
    residue, run_values, validate_cycle_input, CycleError, CycleResult, LowPoint, LowPointType,
    Provenance,
};
use crate::arith::Prime;

const MAX_RUNS: usize = 4;

const TYPES: [LowPointType; 2] = [LowPointType::First, LowPointType::Second];

/// One run of the cycle: `c` steps ending in a drop of `b(p-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Run {
    kind: LowPointType,
    c: i64,
    b: i64,
}

/// Search parameters shared by every branch.
struct Search {
    p: i64,
    r: i64,
}

impl Search {
    /// Whether a run of this shape may start at `anchor`: the trigger holds at
    /// the last position and no congruence is met strictly inside the run.
    fn admissible(&self, anchor: i64, run: Run) -> bool {
        let step = self.p + 1;
        let last = anchor + (run.c - 1) * step;
        if !run.kind.triggers(self.p, self.r, last) {
            return false;
        }
        (1..run.c - 1).all(|j| {
            let v = anchor + j * step;
            TYPES.iter().all(|t| !t.triggers(self.p, self.r, v))
        })
    }

    fn extend(&self, anchor: i64, rem_c: i64, rem_b: i64, prefix: &mut Vec<Run>, out: &mut Vec<Vec<Run>>) {
        if prefix.len() == MAX_RUNS {
            return;
        }
        for kind in TYPES {
            for c in 1..=rem_c.min(self.p) {
                for b in 1..=rem_b.min(self.p) {
                    let run = Run { kind, c, b };
                    let (rc, rb) = (rem_c - c, rem_b - b);
                    if (rc == 0) != (rb == 0) || !self.admissible(anchor, run) {
                        continue;
                    }
                    let next = anchor + c * (self.p + 1) - b * (self.p - 1);
                    prefix.push(run);
                    if rc == 0 {
                        out.push(prefix.clone());
                    } else {
                        self.extend(next, rc, rb, prefix, out);
                    }
                    prefix.pop();
                }
            }
        }
    }

    /// All run structures with the length and drop budgets, starting at `anchor`.
    fn structures(&self, anchor: i64) -> Vec<Vec<Run>> {
        let rem_c = (self.p - 1) / 2;
        let rem_b = (self.p + 1) / 2;
        // Parallelize over the shape of the first run; each branch is independent.
        let firsts: Vec<Run> = TYPES
            .iter()
            .flat_map(|&kind| {
                (1..=rem_c.min(self.p))
                    .flat_map(move |c| (1..=rem_b.min(self.p)).map(move |b| Run { kind, c, b }))
            })
            .collect();
        let mut found: Vec<Vec<Run>> = firsts
            .par_iter()
            .flat_map_iter(|&run| {
                let mut out = Vec::new();
                let (rc, rb) = (rem_c - run.c, rem_b - run.b);
                if (rc == 0) == (rb == 0) && self.admissible(anchor, run) {
                    let mut prefix = vec![run];
                    if rc == 0 {
                        out.push(prefix);
                    } else {
                        let next = anchor + run.c * (self.p + 1) - run.b * (self.p - 1);
                        self.extend(next, rc, rb, &mut prefix, &mut out);
                    }
                }
                out
            })
            .collect();
        found.sort_by_key(|runs| {
            (
                runs.len(),
                runs.iter().map(|r| r.kind).collect::<Vec<_>>(),
                runs.iter().map(|r| r.c).collect::<Vec<_>>(),
                runs.iter().map(|r| r.b).collect::<Vec<_>>(),
            )
        });
        found
    }

    /// Values and low points of a structure started at `anchor`.
    fn render(&self, anchor: i64, runs: &[Run]) -> (Vec<i64>, Vec<LowPoint>) {
        let mut values = Vec::new();
        let mut lps = Vec::new();
        let mut a = anchor;
        for run in runs {
            a = run_values(self.p, a, run.c, run.b, &mut values);
            lps.push(LowPoint::new(run.kind, run.c, run.b, a));
        }
        (values, lps)
    }
}

/// Enumerates every low-point structure compatible with the cycle constraints.
///
/// For non-semi-ordinary input the structure starts and ends at `k`. For
/// semi-ordinary input it is computed for `Θ(f)`, anchored at `k + (p+1)`,
/// and the reported values are `k + (p+1)` followed by all but the last value
/// of that cycle. When `r = 1` and `p` divides `(k0+1)(2k0-1)` the first drop
/// is unknown, and every jumping number `b` in `0..=p` is tried.
pub fn cycle_solver(p: Prime, r: i64, k: i64, semi_ordinary: bool) -> Result<Vec<CycleResult>, CycleError> {
    if !p.is_odd() {
        return Err(CycleError::InvalidInput("the solver needs an odd prime".into()));
    }
    if r > 1 {
        return Err(CycleError::InvalidInput(format!("the solver covers r in {{0, 1}}, got {r}")));
    }
    validate_cycle_input(p, r, k, semi_ordinary)?;
    let q = p.as_i64();
    let search = Search { p: q, r };
    let mut base_caveats = Vec::new();
    if r == 0 {
        base_caveats.push("r = 0 cycles are produced by the solver only".to_string());
    }
    let make = |values, low_points, caveats| CycleResult {
        p,
        r,
        k,
        semi_ordinary,
        values,
        low_points,
        provenance: Provenance::Solver,
        caveats,
    };

    if !semi_ordinary {
        let structures = search.structures(k);
        let ambiguous = structures.len() > 1;
        return Ok(structures
            .iter()
            .map(|runs| {
                let (values, lps) = search.render(k, runs);
                let mut caveats = base_caveats.clone();
                if ambiguous {
                    caveats.push("several structures satisfy the constraints".to_string());
                }
                make(values, lps, caveats)
            })
            .collect());
    }

    let k0 = residue(p, k);
    let mut firsts: Vec<(i64, Option<i64>)> = Vec::new();
    if r == 1 && ((k0 + 1) * (2 * k0 - 1)) % q == 0 {
        for b in 0..=q {
            let kg = k + (q + 1) - b * (q - 1);
            if kg >= 1 {
                firsts.push((kg, Some(b)));
            }
        }
    } else {
        firsts.push((k + q + 1, None));
    }

    let mut results = Vec::new();
    let len = (q - 1) / 2;
    for (kg, first_b) in firsts {
        let mut caveats = base_caveats.clone();
        caveats.push(format!("low points are those of the cycle of Θ(f), anchored at {kg}"));
        if let Some(b) = first_b {
            caveats.push(format!("first step undetermined; candidate jumping number b = {b}"));
        }
        let structures = search.structures(kg);
        if structures.is_empty() {
            // No closed structure: accept the plain run when no congruence is
            // met at a position whose successor lies inside the window.
            let quiet = (0..len - 1).all(|j| {
                let v = kg + j * (q + 1);
                TYPES.iter().all(|t| !t.triggers(q, r, v))
            });
            if quiet {
                let values = (0..len).map(|j| kg + j * (q + 1)).collect();
                let mut caveats = caveats.clone();
                caveats.push("no low point occurs inside the cycle window".to_string());
                results.push(make(values, vec![], caveats));
            }
            continue;
        }
        for runs in &structures {
            let (g_values, lps) = search.render(kg, runs);
            let mut values = vec![kg];
            values.extend_from_slice(&g_values[..g_values.len() - 1]);
            results.push(make(values, lps, caveats.clone()));
        }
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::cycle_closed_form;

    fn prime(p: i64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn matches_examples() {
        let s = cycle_solver(prime(7), 1, 13, false).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].values, vec![3, 11, 13]);
        let s = cycle_solver(prime(5), 1, 13, false).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].values, vec![19, 13]);
        assert_eq!(s[0].low_points.len(), 1);
        assert_eq!(s[0].low_points[0].low_number, 2);
        assert_eq!(s[0].low_points[0].jumping_number, 3);
    }

    #[test]
    fn p3_returns_both_types() {
        let s = cycle_solver(prime(3), 1, 5, false).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|c| c.values == vec![5]));
    }

    #[test]
    fn agrees_with_closed_form_small() {
        for p in [5, 7, 11, 13] {
            let pp = prime(p);
            for k in 1..=3 * p {
                let Ok(cf) = cycle_closed_form(pp, 1, k, false) else {
                    continue;
                };
                let s = cycle_solver(pp, 1, k, false).unwrap();
                assert_eq!(s.len(), 1, "p={p} k={k}");
                assert_eq!(s[0].values, cf.values, "p={p} k={k}");
                assert_eq!(s[0].low_points, cf.low_points, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn semi_matches_closed_form() {
        for p in [5, 7, 11] {
            let pp = prime(p);
            for k in 1..=2 * p {
                let Ok(cf) = cycle_closed_form(pp, 1, k, true) else {
                    continue;
                };
                let s = cycle_solver(pp, 1, k, true).unwrap();
                assert_eq!(s.len(), 1, "p={p} k={k}");
                assert_eq!(s[0].values, cf.values, "p={p} k={k}");
                assert_eq!(s[0].low_points, cf.low_points, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn residual_branch_enumerates() {
        let s = cycle_solver(prime(7), 1, 13, true).unwrap();
        assert!(!s.is_empty());
        assert!(s.iter().all(|c| c.values.len() == 3));
    }

    #[test]
    fn r0_runs() {
        let s = cycle_solver(prime(7), 0, 10, false).unwrap();
        for c in &s {
            assert_eq!(c.values.len(), 3);
            assert_eq!(*c.values.last().unwrap(), 10);
        }
    }
}
