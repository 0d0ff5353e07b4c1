//! Serializable report rows and the plain-text table renderer.

use magnihom_core::rational::{format_rational, Rational};
use magnihom_core::HomologyGroup;
use serde::Serialize;

/// Torsion entries shown in a table cell before eliding the rest.
pub const TABLE_TORSION_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

pub fn rational_text(r: &Rational) -> String {
    format_rational(r)
}

/// A group as rank plus torsion orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub rank: usize,
    pub torsion: Vec<String>,
}

impl From<&HomologyGroup> for GroupReport {
    fn from(g: &HomologyGroup) -> Self {
        Self { rank: g.rank, torsion: g.torsion.iter().map(|t| t.to_string()).collect() }
    }
}

impl GroupReport {
    /// `Z^r + Z/t1 + ...` with the torsion list cut at [`TABLE_TORSION_LIMIT`].
    pub fn cell(&self) -> String {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(format!("Z^{}", self.rank));
        }
        for t in self.torsion.iter().take(TABLE_TORSION_LIMIT) {
            parts.push(format!("Z/{t}"));
        }
        if self.torsion.len() > TABLE_TORSION_LIMIT {
            parts.push(format!("...({} more)", self.torsion.len() - TABLE_TORSION_LIMIT));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            width[i] = width[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(c);
            if i + 1 < cells.len() {
                s.push_str(&" ".repeat(width[i] - c.chars().count()));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use magnihom_core::homology::HomologyGroup;

    #[test]
    fn torsion_is_cut_in_tables_only() {
        let g = GroupReport { rank: 1, torsion: (2..=11).map(|t| t.to_string()).collect() };
        let cell = g.cell();
        assert!(cell.starts_with("Z^1 + Z/2"));
        assert!(cell.contains("Z/9"));
        assert!(!cell.contains("Z/10"));
        assert!(cell.ends_with("...(2 more)"));
        assert_eq!(serde_json::to_string(&g).unwrap().matches('"').count(), 2 * 10 + 4);
        assert_eq!(GroupReport::from(&HomologyGroup::zero()).cell(), "0");
    }

    #[test]
    fn columns_align() {
        let t = table(&["a", "bb"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    bb\nxyz  1\n");
    }
}
