//! Regression dataset with the structural checks done once, up front.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// A design matrix and strictly positive response, validated at construction.
///
/// Invariants held by every instance: `n >= p >= 1`, all entries finite,
/// every response positive, and the design has full column rank, so fitting
/// code never has to re-check shapes or ranks.
#[derive(Debug, Clone)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: DVector<f64>,
    column_names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>, column_names: Option<Vec<String>>) -> Result<Self> {
        let (n, p) = x.shape();
        if y.len() != n {
            return Err(Error::InvalidData(format!(
                "design has {n} rows but response has {} entries",
                y.len()
            )));
        }
        if p < 1 {
            return Err(Error::InvalidData("design must have at least one column".into()));
        }
        if n < p {
            return Err(Error::InvalidData(format!(
                "need at least as many observations as covariates, got n = {n} < p = {p}"
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("design entries must be finite".into()));
        }
        if let Some(bad) = y.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "responses must be positive and finite, offender at row {bad}: {}",
                y[bad]
            )));
        }
        if let Some(names) = &column_names {
            if names.len() != p {
                return Err(Error::InvalidData(format!(
                    "{} column names for {p} columns",
                    names.len()
                )));
            }
        }
        let svd = x.clone().svd(false, false);
        let sv_max = svd.singular_values.max();
        let rank_eps = sv_max * n.max(p) as f64 * f64::EPSILON;
        if svd.rank(rank_eps) < p {
            return Err(Error::InvalidData(
                "design matrix is rank deficient; drop collinear columns".into(),
            ));
        }
        Ok(Dataset { x, y, column_names })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.column_names.as_deref()
    }

    /// `X beta` for a conforming coefficient vector.
    pub fn linear_predictor(&self, beta: &DVector<f64>) -> Result<DVector<f64>> {
        if beta.len() != self.p() {
            return Err(Error::InvalidData(format!(
                "beta has {} entries for {} columns",
                beta.len(),
                self.p()
            )));
        }
        Ok(&self.x * beta)
    }

    /// Copy with one response replaced, for moving-outlier experiments.
    pub fn with_response_at(&self, row: usize, value: f64) -> Result<Self> {
        if row >= self.n() {
            return Err(Error::InvalidData(format!("row {row} out of range")));
        }
        let mut y = self.y.clone();
        y[row] = value;
        Dataset::new(self.x.clone(), y, self.column_names.clone())
    }

    /// Copy without one observation, for leave-one-out reference fits.
    pub fn without_row(&self, row: usize) -> Result<Self> {
        if row >= self.n() {
            return Err(Error::InvalidData(format!("row {row} out of range")));
        }
        let keep: Vec<usize> = (0..self.n()).filter(|&i| i != row).collect();
        let x = self.x.select_rows(keep.iter());
        let y = self.y.select_rows(keep.iter());
        Dataset::new(x, y, self.column_names.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    fn ok_data() -> Dataset {
        let x = dmatrix![1.0, 0.1; 1.0, 0.4; 1.0, -0.2; 1.0, 0.9];
        let y = dvector![1.0, 2.0, 0.5, 3.0];
        Dataset::new(x, y, None).unwrap()
    }

    #[test]
    fn accepts_well_formed_data() {
        let d = ok_data();
        assert_eq!((d.n(), d.p()), (4, 2));
    }

    #[test]
    fn rejects_shape_mismatch() {
        let x = dmatrix![1.0, 0.1; 1.0, 0.4];
        assert!(Dataset::new(x, dvector![1.0, 2.0, 3.0], None).is_err());
    }

    #[test]
    fn rejects_more_columns_than_rows() {
        let x = dmatrix![1.0, 0.1, 3.0; 1.0, 0.4, -1.0];
        assert!(Dataset::new(x, dvector![1.0, 2.0], None).is_err());
    }

    #[test]
    fn rejects_nonpositive_or_nonfinite_responses() {
        let x = dmatrix![1.0; 1.0; 1.0];
        assert!(Dataset::new(x.clone(), dvector![1.0, 0.0, 2.0], None).is_err());
        assert!(Dataset::new(x.clone(), dvector![1.0, -3.0, 2.0], None).is_err());
        assert!(Dataset::new(x, dvector![1.0, f64::NAN, 2.0], None).is_err());
    }

    #[test]
    fn rejects_nonfinite_design() {
        let x = dmatrix![1.0, 0.1; 1.0, f64::INFINITY; 1.0, 0.3];
        assert!(Dataset::new(x, dvector![1.0, 2.0, 3.0], None).is_err());
    }

    #[test]
    fn rejects_rank_deficiency() {
        // Second column is 2x the first.
        let x = dmatrix![1.0, 2.0; 3.0, 6.0; -1.0, -2.0];
        let err = Dataset::new(x, dvector![1.0, 2.0, 3.0], None).unwrap_err();
        assert!(err.to_string().contains("rank"));
    }

    #[test]
    fn rejects_wrong_name_count() {
        let x = dmatrix![1.0, 0.1; 1.0, 0.4; 1.0, -0.2];
        let y = dvector![1.0, 2.0, 0.5];
        assert!(Dataset::new(x, y, Some(vec!["a".into()])).is_err());
    }

    #[test]
    fn row_edit_helpers() {
        let d = ok_data();
        let d2 = d.with_response_at(1, 9.0).unwrap();
        assert_eq!(d2.y()[1], 9.0);
        assert!(d.with_response_at(10, 1.0).is_err());
        let d3 = d.without_row(0).unwrap();
        assert_eq!(d3.n(), 3);
        assert_eq!(d3.y()[0], 2.0);
    }

    #[test]
    fn linear_predictor_checks_dimensions() {
        let d = ok_data();
        assert!(d.linear_predictor(&dvector![1.0]).is_err());
        let lp = d.linear_predictor(&dvector![0.5, 2.0]).unwrap();
        assert_eq!(lp.len(), 4);
        assert!((lp[0] - 0.7).abs() < 1e-15);
    }
}
