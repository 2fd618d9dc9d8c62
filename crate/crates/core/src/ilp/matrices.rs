use crate::schedule::Schedule;

/// Values of the decision variables. Indices in the accessors are 1-based
/// slots; storage is row-major.
///
/// The derived ordering compares `X` row-major, then `Y`, then `R`, which is
/// the tie-break the exact oracle uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionMatrices {
    n: usize,
    x: Vec<u64>,
    y: Vec<u64>,
    r: Vec<bool>,
}

impl SolutionMatrices {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            x: vec![0; n * n],
            y: vec![0; n * n],
            r: vec![false; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "index ({i}, {j}) out of range for n = {}",
            self.n
        );
        (i - 1) * self.n + (j - 1)
    }

    /// Participants of arrival slot `i` allocated by the request at `j`.
    pub fn x(&self, i: usize, j: usize) -> u64 {
        self.x[self.idx(i, j)]
    }

    /// Participants of departure slot `i` de-allocated by the request at `j`.
    pub fn y(&self, i: usize, j: usize) -> u64 {
        self.y[self.idx(i, j)]
    }

    pub fn r(&self, j: usize) -> bool {
        self.r[j - 1]
    }

    pub fn set_x(&mut self, i: usize, j: usize, v: u64) {
        let k = self.idx(i, j);
        self.x[k] = v;
    }

    pub fn set_y(&mut self, i: usize, j: usize, v: u64) {
        let k = self.idx(i, j);
        self.y[k] = v;
    }

    pub fn set_r(&mut self, j: usize, v: bool) {
        self.r[j - 1] = v;
    }

    pub(crate) fn add_x(&mut self, i: usize, j: usize, v: u64) {
        let k = self.idx(i, j);
        self.x[k] += v;
    }

    pub(crate) fn add_y(&mut self, i: usize, j: usize, v: u64) {
        let k = self.idx(i, j);
        self.y[k] += v;
    }

    pub fn x_column_sum(&self, j: usize) -> u64 {
        (1..=self.n).map(|i| self.x(i, j)).sum()
    }

    pub fn y_column_sum(&self, j: usize) -> u64 {
        (1..=self.n).map(|i| self.y(i, j)).sum()
    }

    /// Column net changes `s_j = sum_i x_ij - sum_i y_ij`, unchecked.
    pub fn net_changes(&self) -> Schedule {
        Schedule::from_changes(
            (1..=self.n)
                .map(|j| self.x_column_sum(j) as i64 - self.y_column_sum(j) as i64)
                .collect(),
        )
    }

    /// All variable values in declaration order (`X`, `Y`, `R`).
    pub fn to_values(&self) -> Vec<i64> {
        self.x
            .iter()
            .chain(&self.y)
            .map(|&v| v as i64)
            .chain(self.r.iter().map(|&b| b as i64))
            .collect()
    }
}
