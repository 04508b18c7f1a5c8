use crate::error::{Error, Result};

/// Result of Dörfler marking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    pub marked: Vec<usize>,
    /// All indicators were zero, so there is nothing left to refine.
    pub converged: bool,
}

/// Smallest set `M` with `Σ_{T∈M} ϱ(T)² >= θ Σ_T ϱ(T)²`.
///
/// Indicators are taken in descending order, ties by ascending index, so the
/// result is deterministic and of minimal cardinality.
pub fn doerfler_mark(indicators: &[f64], theta: f64) -> Result<Marking> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in (0, 1), got {theta}"
        )));
    }
    if let Some(i) = indicators
        .iter()
        .position(|&x| !(x >= 0.0) || !x.is_finite())
    {
        return Err(Error::InvalidParameter(format!(
            "indicator {i} is {} (must be finite and >= 0)",
            indicators[i]
        )));
    }
    let total: f64 = indicators.iter().sum();
    if total == 0.0 {
        return Ok(Marking {
            marked: Vec::new(),
            converged: true,
        });
    }
    let mut order: Vec<usize> = (0..indicators.len()).collect();
    order.sort_by(|&a, &b| indicators[b].total_cmp(&indicators[a]).then(a.cmp(&b)));
    let goal = theta * total;
    let mut sum = 0.0;
    let mut marked = Vec::new();
    for i in order {
        marked.push(i);
        sum += indicators[i];
        if sum >= goal {
            break;
        }
    }
    Ok(Marking {
        marked,
        converged: false,
    })
}
