/// Maximum-weight assignment on a dense `rows x cols` score matrix
/// (Hungarian method with potentials). Every row is matched when
/// `rows <= cols`, otherwise every column. Returns `(row, col)` pairs sorted
/// by row.
pub fn max_weight_assignment(scores: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let rows = scores.len();
    let cols = scores.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    if rows > cols {
        let transposed: Vec<Vec<f64>> = (0..cols)
            .map(|c| (0..rows).map(|r| scores[r][c]).collect())
            .collect();
        let mut pairs: Vec<(usize, usize)> = max_weight_assignment(&transposed)
            .into_iter()
            .map(|(c, r)| (r, c))
            .collect();
        pairs.sort_unstable();
        return pairs;
    }

    // minimise cost = -score; 1-based arrays with sentinel column 0
    let (n, m) = (rows, cols);
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut min_slack = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let reduced = -scores[i0 - 1][j - 1] - u[i0] - v[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
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
    let mut pairs: Vec<(usize, usize)> = (1..=m)
        .filter(|&j| owner[j] != 0)
        .map(|j| (owner[j] - 1, j - 1))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Repeatedly takes the highest remaining score whose row and column are
/// both unused. Ties go to the smaller `(row, col)`.
pub fn greedy_assignment(scores: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let mut cells: Vec<(usize, usize)> = scores
        .iter()
        .enumerate()
        .flat_map(|(r, row)| (0..row.len()).map(move |c| (r, c)))
        .collect();
    cells.sort_by(|&(r1, c1), &(r2, c2)| {
        scores[r2][c2]
            .total_cmp(&scores[r1][c1])
            .then((r1, c1).cmp(&(r2, c2)))
    });
    let cols = scores.first().map_or(0, Vec::len);
    let mut row_used = vec![false; scores.len()];
    let mut col_used = vec![false; cols];
    let mut pairs = Vec::new();
    for (r, c) in cells {
        if !row_used[r] && !col_used[c] {
            row_used[r] = true;
            col_used[c] = true;
            pairs.push((r, c));
        }
    }
    pairs.sort_unstable();
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn total(scores: &[Vec<f64>], pairs: &[(usize, usize)]) -> f64 {
        pairs.iter().map(|&(r, c)| scores[r][c]).sum()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    /// Best total over every injection of rows into columns (rows <= cols).
    fn brute_force(scores: &[Vec<f64>]) -> f64 {
        let (n, m) = (scores.len(), scores[0].len());
        permutations(m)
            .into_iter()
            .map(|p| (0..n).map(|r| scores[r][p[r]]).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn two_by_two() {
        let s = vec![vec![0.9, 0.1], vec![0.8, 0.2]];
        assert_eq!(max_weight_assignment(&s), [(0, 0), (1, 1)]);
        assert_eq!(greedy_assignment(&s), [(0, 0), (1, 1)]);
        assert!((total(&s, &max_weight_assignment(&s)) - 1.1).abs() < 1e-15);
    }

    #[test]
    fn greedy_can_be_suboptimal() {
        let s = vec![vec![1.0, 0.9], vec![0.9, 0.0]];
        assert_eq!(greedy_assignment(&s), [(0, 0), (1, 1)]);
        assert_eq!(max_weight_assignment(&s), [(0, 1), (1, 0)]);
    }

    #[test]
    fn rectangular() {
        let wide = vec![vec![0.1, 0.5, 0.3]];
        assert_eq!(max_weight_assignment(&wide), [(0, 1)]);
        let tall = vec![vec![0.1], vec![0.7], vec![0.3]];
        assert_eq!(max_weight_assignment(&tall), [(1, 0)]);
        assert!(max_weight_assignment(&[]).is_empty());
    }

    proptest! {
        #[test]
        fn matches_brute_force(n in 1usize..5, extra in 0usize..3, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = n + extra;
            let s: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.random::<f64>()).collect()).collect();
            let pairs = max_weight_assignment(&s);
            prop_assert_eq!(pairs.len(), n);
            prop_assert!((total(&s, &pairs) - brute_force(&s)).abs() < 1e-12);
        }

        #[test]
        fn greedy_is_injective_and_no_better(n in 1usize..7, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let s: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random::<f64>()).collect()).collect();
            let g = greedy_assignment(&s);
            let mut cols: Vec<usize> = g.iter().map(|p| p.1).collect();
            cols.sort_unstable();
            cols.dedup();
            prop_assert_eq!(cols.len(), g.len());
            prop_assert!(total(&s, &g) <= brute_force(&s) + 1e-12);
        }
    }
}
