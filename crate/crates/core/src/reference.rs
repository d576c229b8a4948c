//! Published unbiased performance of eight radius-3 rules (100 000 random
//! ICs per cell). The first four are density-task rules used as GA seeds;
//! the last four were evolved for density plus a logical task.

use crate::rule::RuleTable;
use crate::tasks::TaskKind;

/// Lattice sizes of the reference columns.
pub const SIZES: [usize; 3] = [149, 599, 999];

#[derive(Debug, Clone, Copy)]
pub struct ReferenceRule {
    pub hex: &'static str,
    pub name: Option<&'static str>,
    /// Performance by task (density, and, or), then by [`SIZES`].
    pub performance: [[f64; 3]; 3],
}

impl ReferenceRule {
    pub fn rule(&self) -> RuleTable {
        RuleTable::parse_hex(self.hex).expect("reference hex is valid")
    }

    pub fn label(&self) -> &'static str {
        self.name.unwrap_or("")
    }

    pub fn value(&self, task: TaskKind, n_cells: usize) -> Option<f64> {
        let col = SIZES.iter().position(|&s| s == n_cells)?;
        let row = match task {
            TaskKind::Density => 0,
            TaskKind::And => 1,
            TaskKind::Or => 2,
        };
        Some(self.performance[row][col])
    }
}

pub const TABLE: [ReferenceRule; 8] = [
    ReferenceRule {
        hex: "0504058705000F77037755837BFFB77F",
        name: Some("Crutchfield/Mitchell"),
        performance: [[0.773, 0.725, 0.707], [0.713, 0.73, 0.738], [0.664, 0.578, 0.548]],
    },
    ReferenceRule {
        hex: "000F730F001FFF0F000FFF0F001FFF1F",
        name: Some("Das"),
        performance: [[0.823, 0.777, 0.763], [0.68, 0.684, 0.68], [0.733, 0.686, 0.675]],
    },
    ReferenceRule {
        hex: "050055050500550555FF55FF55FF55FF",
        name: Some("Koza"),
        performance: [[0.823, 0.766, 0.73], [0.679, 0.674, 0.644], [0.727, 0.671, 0.642]],
    },
    ReferenceRule {
        hex: "0760437B0700413507600F7F47F577FF",
        name: Some("Jouille"),
        performance: [[0.833, 0.788, 0.771], [0.656, 0.642, 0.62], [0.747, 0.736, 0.743]],
    },
    ReferenceRule {
        hex: "0057005D005F005D085FFF7F405FFF5F",
        name: None,
        performance: [[0.78, 0.705, 0.668], [0.77, 0.783, 0.784], [0.634, 0.501, 0.453]],
    },
    ReferenceRule {
        hex: "005F1053405F045F005FFD5F005DFF5F",
        name: None,
        performance: [[0.635, 0.510, 0.503], [0.84, 0.76, 0.754], [0.441, 0.261, 0.254]],
    },
    ReferenceRule {
        hex: "005F005F005F005F005FFF6F005FFF5F",
        name: None,
        performance: [[0.805, 0.755, 0.737], [0.624, 0.605, 0.581], [0.756, 0.738, 0.743]],
    },
    ReferenceRule {
        hex: "0504070705002573077755B37BFFF77F",
        name: None,
        performance: [[0.745, 0.65, 0.61], [0.501, 0.421, 0.371], [0.784, 0.793, 0.785]],
    },
];

/// The four density rules used to seed the GA.
pub fn density_seed_rules() -> Vec<RuleTable> {
    TABLE[..4].iter().map(ReferenceRule::rule).collect()
}

pub fn lookup(rule: RuleTable) -> Option<&'static ReferenceRule> {
    TABLE.iter().find(|r| r.rule() == rule)
}
