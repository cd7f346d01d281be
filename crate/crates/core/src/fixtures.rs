//! Bundled data sets.
//!
//! The maize data are dissimilarities among seven populations. Genetic distances are modified Roger's distances from simple sequence
//! repeat markers; the second matrix holds mid-parent heterosis for days to
//! silking of the crosses. Two versions of the heterosis matrix are shipped:
//! [`maize_heterosis`] has `(Pop21, Pop29) = 0.4`, which agrees with the
//! original field study, and [`maize_heterosis_reprinted`] has the `-0.4` of
//! the widely reprinted secondary table.

use crate::distgeom::{DataMatrix, DissimilarityMatrix};
use crate::io::read_table;

pub const MAIZE_POPULATIONS: [&str; 7] = ["Pool24", "Pop21", "Pop22", "Pop25", "Pop29", "Pop32", "Pop43"];

pub const MAIZE_GENETIC_CSV: &str = include_str!("../data/maize_genetic.csv");
pub const MAIZE_HETEROSIS_CSV: &str = include_str!("../data/maize_heterosis.csv");
pub const MAIZE_HETEROSIS_REPRINTED_CSV: &str = include_str!("../data/maize_heterosis_reprinted.csv");

/// Sepal length and width, petal length and width (cm) of the 50 setosa
/// flowers in Fisher's iris data.
pub const IRIS_SETOSA_CSV: &str = include_str!("../data/iris_setosa.csv");

fn parse(csv: &str) -> DissimilarityMatrix {
    read_table(csv.as_bytes(), true)
        .and_then(|t| t.into_dissimilarity())
        .expect("bundled fixture is a valid dissimilarity matrix")
}

pub fn maize_genetic() -> DissimilarityMatrix {
    parse(MAIZE_GENETIC_CSV)
}

pub fn maize_heterosis() -> DissimilarityMatrix {
    parse(MAIZE_HETEROSIS_CSV)
}

pub fn maize_heterosis_reprinted() -> DissimilarityMatrix {
    parse(MAIZE_HETEROSIS_REPRINTED_CSV)
}

pub fn iris_setosa() -> DataMatrix {
    read_table(IRIS_SETOSA_CSV.as_bytes(), true)
        .and_then(|t| t.into_data())
        .expect("bundled fixture is a valid data matrix")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_differ_only_at_one_pair() {
        let a = maize_heterosis();
        let b = maize_heterosis_reprinted();
        assert_eq!(a.order(), 7);
        let mut diffs = Vec::new();
        for i in 0..7 {
            for j in (i + 1)..7 {
                if a.get(i, j) != b.get(i, j) {
                    diffs.push((i, j, a.get(i, j), b.get(i, j)));
                }
            }
        }
        assert_eq!(diffs, vec![(1, 4, 0.4, -0.4)]);
        assert_eq!(maize_genetic().get(6, 5), 0.32);
        let iris = iris_setosa();
        assert_eq!((iris.nrows(), iris.ncols()), (50, 4));
    }
}
