//! The flat result record shared by every experiment kind.

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Missing,
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
}

pub trait IntoCell {
    fn into_cell(self) -> Cell;
}

impl IntoCell for Option<u64> {
    fn into_cell(self) -> Cell {
        self.map_or(Cell::Missing, Cell::Int)
    }
}

impl IntoCell for Option<f64> {
    fn into_cell(self) -> Cell {
        match self {
            Some(x) if x.is_finite() => Cell::Float(x),
            Some(x) => {
                log::warn!("non-finite value {x} written as missing");
                Cell::Missing
            }
            None => Cell::Missing,
        }
    }
}

impl IntoCell for Option<bool> {
    fn into_cell(self) -> Cell {
        self.map_or(Cell::Missing, Cell::Bool)
    }
}

impl IntoCell for Option<String> {
    fn into_cell(self) -> Cell {
        self.map_or(Cell::Missing, Cell::Text)
    }
}

macro_rules! result_row {
    ($($(#[$doc:meta])* $field:ident: $ty:ty),* $(,)?) => {
        /// Every field is optional; kinds fill in what they compute.
        #[derive(Debug, Clone, Default, PartialEq)]
        pub struct ResultRow {
            $($(#[$doc])* pub $field: Option<$ty>,)*
        }

        /// Column names in output order. Append new columns at the end.
        pub const COLUMNS: &[&str] = &[$(stringify!($field)),*];

        impl ResultRow {
            pub fn cells(&self) -> Vec<Cell> {
                vec![$(self.$field.clone().into_cell()),*]
            }
        }
    };
}

result_row! {
    kind: String,
    /// Position of the run in grid order.
    run: u64,
    /// Seed that reproduces this row.
    seed: u64,
    /// `ok` or `error`.
    status: String,
    error: String,
    family: String,
    n: u64,
    p: f64,
    gamma: f64,
    /// Target mean degree (uniform weight for `uniform_weights`).
    d: f64,
    /// Resolved maximum degree.
    m: f64,
    t: f64,
    beta: f64,
    replicates: u64,
    graphs: u64,
    edges: u64,
    degree_sum: u64,
    two_stars: u64,
    sum_pi_sq: f64,
    n_sum_pi_sq: f64,
    connected: bool,
    ed: f64,
    var_d: f64,
    ed2: f64,
    var_d2_bound: f64,
    leading_estimate: f64,
    regime: String,
    growth_exponent: f64,
    mean_tau: f64,
    stderr_tau: f64,
    predicted_tau: f64,
    z_score: f64,
    mean_infection_prob: f64,
    stderr_infection_prob: f64,
    gamma_upper: f64,
    jensen_satisfied: bool,
    sample_mean_d: f64,
    sample_var_d: f64,
    sample_mean_d2: f64,
    sample_var_d2: f64,
    wall_time_s: f64,
}

impl ResultRow {
    pub fn is_error(&self) -> bool {
        self.status.as_deref() == Some("error")
    }
}
