use super::{check_weights, SolveError, SolverParams, UnitSolution};
use crate::scalar::Scalar;
use crate::schedule::SolveUnit;

/// Closed form for units without internal edges other than self-loops:
/// `w_i`, or `w_i / (1 - c a_ii)` for a kept loop.
pub fn solve_singletons<T: Scalar>(
    unit: &SolveUnit,
    w: &[T],
    params: &SolverParams<T>,
) -> Result<UnitSolution<T>, SolveError> {
    check_weights(unit, w)?;
    if let Some((src, dst)) = unit.edges().find(|&(u, v)| u != v) {
        return Err(SolveError::EdgeInSingletonGroup { src, dst });
    }
    let mut loops = 0;
    let ranks = w
        .iter()
        .enumerate()
        .map(|(i, &wi)| {
            if unit.has_loop(i) {
                loops += 1;
                let a_ii = T::one() / T::from_count(unit.out_degree(i));
                wi / (T::one() - params.c * a_ii)
            } else {
                wi
            }
        })
        .collect();
    Ok(UnitSolution {
        ranks,
        iterations: 0,
        edge_visits: loops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::UnitKind;

    fn params() -> SolverParams<f64> {
        SolverParams::new(0.85, 1e-9).unwrap()
    }

    #[test]
    fn weight_passes_through_without_loop() {
        let unit = SolveUnit::new(UnitKind::SingletonGroup, 0, vec![4], vec![], vec![0]);
        assert_eq!(solve_singletons(&unit, &[0.3], &params()).unwrap().ranks, vec![0.3]);
    }

    #[test]
    fn pure_loop() {
        let unit = SolveUnit::new(UnitKind::SingletonGroup, 0, vec![0], vec![(0, 0)], vec![1]);
        let r = solve_singletons(&unit, &[1.0], &params()).unwrap().ranks[0];
        assert!((r - 1.0 / 0.15).abs() < 1e-12);
    }

    #[test]
    fn loop_with_half_weight_matches_geometric_series() {
        let unit = SolveUnit::new(UnitKind::SingletonGroup, 0, vec![0], vec![(0, 0)], vec![2]);
        let r = solve_singletons(&unit, &[1.0], &params()).unwrap();
        let series: f64 = (0..200).map(|k| 0.425f64.powi(k)).sum();
        assert!((r.ranks[0] - series).abs() < 1e-12);
        assert!((r.ranks[0] - 1.739_130_434_782_608_6).abs() < 1e-12);
        assert_eq!(r.edge_visits, 1);
    }

    #[test]
    fn rejects_internal_edges() {
        let unit = SolveUnit::new(UnitKind::SingletonGroup, 0, vec![0, 1], vec![(0, 1)], vec![1, 0]);
        assert!(matches!(
            solve_singletons(&unit, &[1.0, 1.0], &params()),
            Err(SolveError::EdgeInSingletonGroup { src: 0, dst: 1 })
        ));
    }
}
