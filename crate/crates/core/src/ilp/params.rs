use serde::{Deserialize, Serialize};

/// Minimum alignment scores below which no pairwise variable is created.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub min_cell_cell_alignment: f64,
    pub min_cell_qcons_alignment: f64,
    pub min_title_qcons_alignment: f64,
    pub min_title_title_alignment: f64,
    pub min_cell_qchoice_alignment: f64,
    pub min_title_qchoice_alignment: f64,
    /// Kept for completeness; options are aligned as whole phrases, so the
    /// per-constituent choice thresholds have no variable to gate.
    pub min_cell_qchoice_cons_alignment: f64,
    pub min_title_qchoice_cons_alignment: f64,
    pub min_active_cell_aggr_alignment: f64,
    pub min_active_title_aggr_alignment: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            min_cell_cell_alignment: 0.6,
            min_cell_qcons_alignment: 0.1,
            min_title_qcons_alignment: 0.1,
            min_title_title_alignment: 0.0,
            min_cell_qchoice_alignment: 0.2,
            min_title_qchoice_alignment: 0.2,
            min_cell_qchoice_cons_alignment: 0.4,
            min_title_qchoice_cons_alignment: 0.4,
            min_active_cell_aggr_alignment: 0.1,
            min_active_title_aggr_alignment: 0.1,
        }
    }
}

impl Thresholds {
    pub fn values(&self) -> [f64; 10] {
        [
            self.min_cell_cell_alignment,
            self.min_cell_qcons_alignment,
            self.min_title_qcons_alignment,
            self.min_title_title_alignment,
            self.min_cell_qchoice_alignment,
            self.min_title_qchoice_alignment,
            self.min_cell_qchoice_cons_alignment,
            self.min_title_qchoice_cons_alignment,
            self.min_active_cell_aggr_alignment,
            self.min_active_title_aggr_alignment,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConstants {
    pub max_tables_to_chain: usize,
    pub qcons_coalign_max_dist: usize,
    pub which_term_span: usize,
    /// Not referenced by any constraint.
    pub which_term_mul_boost: f64,
    pub min_alignment_which_term: f64,
    pub table_usage_penalty: f64,
    /// Already reflected in the negative active-row weight.
    pub row_usage_penalty: f64,
    pub inter_table_alignment_penalty: f64,
    pub max_alignments_per_qcons: usize,
    pub max_alignments_per_cell: usize,
    pub relation_match_coeff: f64,
    pub empty_relation_match_coeff: f64,
    pub no_relation_match_coeff: f64,
    pub max_rows_per_table: usize,
    pub min_active_qcons: usize,
    pub max_active_column_choice_alignments: usize,
    pub max_active_choice_column_vars: usize,
    pub max_active_choice_column: usize,
    pub max_active_table_choice_alignments: usize,
    pub min_active_cells_per_row: usize,
}

impl Default for ModelConstants {
    fn default() -> Self {
        ModelConstants {
            max_tables_to_chain: 4,
            qcons_coalign_max_dist: 4,
            which_term_span: 2,
            which_term_mul_boost: 1.0,
            min_alignment_which_term: 0.6,
            table_usage_penalty: 3.0,
            row_usage_penalty: 1.0,
            inter_table_alignment_penalty: 0.1,
            max_alignments_per_qcons: 2,
            max_alignments_per_cell: 2,
            relation_match_coeff: 0.2,
            empty_relation_match_coeff: 0.0,
            no_relation_match_coeff: -5.0,
            max_rows_per_table: 4,
            min_active_qcons: 1,
            max_active_column_choice_alignments: 1,
            max_active_choice_column_vars: 2,
            max_active_choice_column: 2,
            max_active_table_choice_alignments: 4,
            min_active_cells_per_row: 2,
        }
    }
}

/// How inter-table cell-cell edges are weighted before the inter-table penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellCellMode {
    /// `w(e)`.
    #[default]
    Scored,
    /// The flat `inter_table_cell_cell` bonus.
    Fixed,
}

/// Objective weights. Pairwise question/option edges always carry their
/// alignment score; everything not listed here weighs zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveWeights {
    pub cell_cell_mode: CellCellMode,
    pub inter_table_cell_cell: f64,
    pub active_table: f64,
    pub active_row: f64,
    pub active_column: f64,
    pub active_header: f64,
    pub active_cell: f64,
    pub active_qcons: f64,
    pub aux_which: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        ObjectiveWeights {
            cell_cell_mode: CellCellMode::Scored,
            inter_table_cell_cell: 1.0,
            active_table: 1.0,
            active_row: -1.0,
            active_column: 1.0,
            active_header: 0.3,
            active_cell: 0.0,
            active_qcons: 0.3,
            aux_which: 1.5,
        }
    }
}

/// Everything the model builder is parameterized by.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub thresholds: Thresholds,
    pub constants: ModelConstants,
    pub weights: ObjectiveWeights,
}

impl ModelParams {
    /// Objective coefficient of an active table, net of the usage penalty.
    pub fn table_coeff(&self) -> f64 {
        self.weights.active_table - self.constants.table_usage_penalty
    }

    pub fn cell_cell_coeff(&self, score: f64) -> f64 {
        let base = match self.weights.cell_cell_mode {
            CellCellMode::Scored => score,
            CellCellMode::Fixed => self.weights.inter_table_cell_cell,
        };
        base - self.constants.inter_table_alignment_penalty
    }

    /// Boost for one cell aligned to two constituents `dist` tokens apart.
    pub fn proximity_coeff(dist: usize) -> f64 {
        1.0 / (dist as f64 + 1.0)
    }
}
