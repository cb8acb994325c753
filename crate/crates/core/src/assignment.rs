//! Minimum-cost assignment (Hungarian method with potentials, O(n^3)).

/// Solves the rectangular assignment problem for a `rows x cols` cost
/// matrix. Returns, for every row, the column it is assigned to; when there
/// are more rows than columns the surplus rows get `None`.
///
/// Costs must be finite. The result is deterministic: candidate columns are
/// scanned in index order and only strictly better slacks replace the
/// current choice.
pub fn min_cost_assignment(costs: &[Vec<f64>]) -> Vec<Option<usize>> {
    let rows = costs.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = costs[0].len();
    debug_assert!(costs.iter().all(|r| r.len() == cols));
    if cols == 0 {
        return vec![None; rows];
    }
    // pad to square; the number of dummy assignments is fixed, so any
    // constant dummy cost leaves the optimum among real entries unchanged
    let n = rows.max(cols);
    let at = |i: usize, j: usize| -> f64 {
        if i < rows && j < cols {
            costs[i][j]
        } else {
            0.0
        }
    };

    // 1-indexed potentials; column 0 is the virtual start
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1]; // owner[j] = row assigned to column j
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = at(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut result = vec![None; rows];
    for j in 1..=n {
        let i = owner[j];
        if i >= 1 && i <= rows && j <= cols {
            result[i - 1] = Some(j - 1);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_two_by_two() {
        let r = min_cost_assignment(&[vec![0.1, 0.9], vec![0.9, 0.1]]);
        assert_eq!(r, vec![Some(0), Some(1)]);
    }

    #[test]
    fn anti_diagonal() {
        let r = min_cost_assignment(&[vec![5.0, 1.0], vec![1.0, 5.0]]);
        assert_eq!(r, vec![Some(1), Some(0)]);
    }

    #[test]
    fn more_rows_than_columns() {
        let r = min_cost_assignment(&[vec![3.0], vec![1.0], vec![2.0]]);
        assert_eq!(r, vec![None, Some(0), None]);
    }

    #[test]
    fn more_columns_than_rows() {
        let r = min_cost_assignment(&[vec![4.0, 2.0, 8.0]]);
        assert_eq!(r, vec![Some(1)]);
    }

    #[test]
    fn empty_inputs() {
        assert!(min_cost_assignment(&[]).is_empty());
        assert_eq!(min_cost_assignment(&[vec![], vec![]]), vec![None, None]);
    }
}
