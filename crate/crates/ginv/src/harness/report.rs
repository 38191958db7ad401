//! The all-predicates analysis of a matrix pair, serializable to JSON.

use std::collections::BTreeMap;

use crate::addorder::{self, AdditivityReport};
use crate::coreinv;
use crate::geninv;
use crate::numkit::{self, ComplexMatrix, Tolerance};
use crate::ortho;
use crate::psum;
use crate::{Error, Result};

use super::json::Json;

/// Every predicate outcome, residual, and derived quantity for a pair.
///
/// Predicates whose hypotheses do not hold (non-square inputs, operands
/// without a core inverse, a null parallel-sum pair) are `None`, with the
/// reason recorded under the same key in `skipped`.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub rows: usize,
    pub cols: usize,
    pub tolerance: Tolerance,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub rank_a: usize,
    pub rank_b: usize,
    pub rank_sum: usize,

    pub left_star_orth: bool,
    pub right_star_orth: bool,
    pub star_orth: bool,
    pub range_perpendicular: bool,
    pub star_leq_ab: bool,
    pub star_leq_ba: bool,
    pub neg_star_conditions: bool,

    pub index_a: Option<usize>,
    pub index_b: Option<usize>,
    pub group_a: Option<bool>,
    pub group_b: Option<bool>,
    pub left_core_orth: Option<bool>,
    pub right_core_orth: Option<bool>,
    pub core_orth: Option<bool>,
    pub strongly_core_orth: Option<bool>,
    pub core_leq_ab: Option<bool>,
    pub n1_conditions: Option<bool>,

    pub additivity: AdditivityReport,

    pub psum_summable: Option<bool>,
    pub psum_witness: Option<String>,
    pub psum_sum: Option<ComplexMatrix>,
    pub psum_max_ginv_deviation: Option<f64>,

    pub pinv_a: ComplexMatrix,
    pub pinv_b: ComplexMatrix,
    pub pinv_sum: ComplexMatrix,
    pub core_inv_a: Option<ComplexMatrix>,
    pub core_inv_b: Option<ComplexMatrix>,
    pub core_inv_sum: Option<ComplexMatrix>,

    pub skipped: BTreeMap<String, String>,
}

/// Run every predicate of the crate on a pair.
pub fn analyze(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<AnalysisReport> {
    if a.shape() != b.shape() {
        return Err(Error::dim(format!(
            "analyze needs equal shapes, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut skipped = BTreeMap::new();
    let sum = a + b;

    let additivity = addorder::dagger_additivity(a, b, tol)?;
    if additivity.core_additive.is_none() {
        skipped.insert(
            "additivity.core".to_string(),
            "needs square inputs whose core inverses exist".to_string(),
        );
    }

    let (psum_summable, psum_witness, psum_sum) = match psum::is_parallel_summable(a, b, tol) {
        Ok(v) => (Some(v.summable), v.witness, v.sum),
        Err(Error::BothZero) => {
            skipped.insert(
                "parallel_sum".to_string(),
                "both operands are null".to_string(),
            );
            (None, None, None)
        }
        Err(e) => return Err(e),
    };

    let mut report = AnalysisReport {
        rows: a.rows(),
        cols: a.cols(),
        tolerance: tol.clone(),
        a: a.clone(),
        b: b.clone(),
        rank_a: numkit::rank(a, tol)?,
        rank_b: numkit::rank(b, tol)?,
        rank_sum: numkit::rank(&sum, tol)?,
        left_star_orth: ortho::left_star_orth(a, b, tol)?,
        right_star_orth: ortho::right_star_orth(a, b, tol)?,
        star_orth: ortho::star_orth(a, b, tol)?,
        range_perpendicular: ortho::range_perpendicular(a, b, tol)?,
        star_leq_ab: addorder::star_leq(a, b, tol)?,
        star_leq_ba: addorder::star_leq(b, a, tol)?,
        neg_star_conditions: addorder::neg_star_conditions(a, b, tol)?,
        index_a: None,
        index_b: None,
        group_a: None,
        group_b: None,
        left_core_orth: None,
        right_core_orth: None,
        core_orth: None,
        strongly_core_orth: None,
        core_leq_ab: None,
        n1_conditions: None,
        additivity,
        psum_summable,
        psum_witness,
        psum_sum,
        psum_max_ginv_deviation: None,
        pinv_a: geninv::pinv(a, tol)?,
        pinv_b: geninv::pinv(b, tol)?,
        pinv_sum: geninv::pinv(&sum, tol)?,
        core_inv_a: None,
        core_inv_b: None,
        core_inv_sum: None,
        skipped,
    };

    if !a.is_square() {
        let reason = "inputs are not square".to_string();
        for key in [
            "core.index_a",
            "core.index_b",
            "core.group_a",
            "core.group_b",
            "core.left_orth",
            "core.right_orth",
            "core.orth",
            "core.strong",
            "core.leq_ab",
            "core.n1",
            "core_inverse.a",
            "core_inverse.b",
            "core_inverse.sum",
        ] {
            report.skipped.insert(key.to_string(), reason.clone());
        }
        return Ok(report);
    }

    let index_a = coreinv::index(a, tol)?;
    let index_b = coreinv::index(b, tol)?;
    let group_a = index_a <= 1;
    let group_b = index_b <= 1;
    report.index_a = Some(index_a);
    report.index_b = Some(index_b);
    report.group_a = Some(group_a);
    report.group_b = Some(group_b);

    if group_a {
        report.left_core_orth = Some(ortho::left_core_orth(a, b, tol)?);
        report.right_core_orth = Some(ortho::right_core_orth(a, b, tol)?);
        report.core_orth = Some(ortho::core_orth(a, b, tol)?);
        report.core_leq_ab = Some(addorder::core_leq(a, b, tol)?);
        report.n1_conditions = Some(addorder::n1_conditions(a, b, tol)?);
        report.core_inv_a = Some(coreinv::core_inverse(a, tol)?);
    } else {
        let reason = format!("a is not a group matrix (index {index_a})");
        for key in [
            "core.left_orth",
            "core.right_orth",
            "core.orth",
            "core.leq_ab",
            "core.n1",
            "core_inverse.a",
        ] {
            report.skipped.insert(key.to_string(), reason.clone());
        }
    }

    if group_b {
        report.core_inv_b = Some(coreinv::core_inverse(b, tol)?);
    } else {
        report.skipped.insert(
            "core_inverse.b".to_string(),
            format!("b is not a group matrix (index {index_b})"),
        );
    }

    if group_a && group_b {
        report.strongly_core_orth = Some(ortho::strongly_core_orth(a, b, tol)?);
    } else {
        report.skipped.insert(
            "core.strong".to_string(),
            "needs both operands to be group matrices".to_string(),
        );
    }

    if coreinv::is_group_matrix(&sum, tol)? {
        report.core_inv_sum = Some(coreinv::core_inverse(&sum, tol)?);
    } else {
        report.skipped.insert(
            "core_inverse.sum".to_string(),
            "a + b is not a group matrix".to_string(),
        );
    }

    Ok(report)
}

impl AnalysisReport {
    /// The stable JSON form; see the schema chapter of the guide.
    pub fn to_json(&self) -> Json {
        let mut root = Json::object();
        root.push("schema", Json::from_str_slice("ginv.analysis/1"));

        let mut dims = Json::object();
        dims.push("rows", Json::Int(self.rows as i64));
        dims.push("cols", Json::Int(self.cols as i64));
        root.push("dims", dims);

        let mut tolerance = Json::object();
        tolerance.push("rank_rel", Json::Float(self.tolerance.rank_rel));
        tolerance.push("zero_rel", Json::Float(self.tolerance.zero_rel));
        tolerance.push("eq_rel", Json::Float(self.tolerance.eq_rel));
        root.push("tolerance", tolerance);

        let mut input = Json::object();
        input.push("a", Json::matrix(&self.a));
        input.push("b", Json::matrix(&self.b));
        root.push("input", input);

        let mut norms = Json::object();
        norms.push("a", Json::Float(self.a.norm_fro()));
        norms.push("b", Json::Float(self.b.norm_fro()));
        root.push("norms", norms);

        let mut ranks = Json::object();
        ranks.push("a", Json::Int(self.rank_a as i64));
        ranks.push("b", Json::Int(self.rank_b as i64));
        ranks.push("sum", Json::Int(self.rank_sum as i64));
        root.push("ranks", ranks);

        let mut star = Json::object();
        star.push("left_orth", Json::Bool(self.left_star_orth));
        star.push("right_orth", Json::Bool(self.right_star_orth));
        star.push("orth", Json::Bool(self.star_orth));
        star.push("range_perpendicular", Json::Bool(self.range_perpendicular));
        star.push("leq_ab", Json::Bool(self.star_leq_ab));
        star.push("leq_ba", Json::Bool(self.star_leq_ba));
        star.push("neg_conditions", Json::Bool(self.neg_star_conditions));
        root.push("star", star);

        let mut core = Json::object();
        core.push(
            "index_a",
            self.index_a.map_or(Json::Null, |i| Json::Int(i as i64)),
        );
        core.push(
            "index_b",
            self.index_b.map_or(Json::Null, |i| Json::Int(i as i64)),
        );
        core.push("group_a", Json::opt_bool(self.group_a));
        core.push("group_b", Json::opt_bool(self.group_b));
        core.push("left_orth", Json::opt_bool(self.left_core_orth));
        core.push("right_orth", Json::opt_bool(self.right_core_orth));
        core.push("orth", Json::opt_bool(self.core_orth));
        core.push("strong", Json::opt_bool(self.strongly_core_orth));
        core.push("leq_ab", Json::opt_bool(self.core_leq_ab));
        core.push("n1", Json::opt_bool(self.n1_conditions));
        root.push("core", core);

        let mut additivity = Json::object();
        additivity.push("dagger", Json::Bool(self.additivity.dagger_additive));
        additivity.push("rank", Json::Bool(self.additivity.rank_additive));
        additivity.push("core", Json::opt_bool(self.additivity.core_additive));
        let mut residuals = Json::object();
        for (k, v) in &self.additivity.criterion_residuals {
            residuals.push(k, Json::Float(*v));
        }
        additivity.push("residuals", residuals);
        root.push("additivity", additivity);

        let mut ps = Json::object();
        ps.push("summable", Json::opt_bool(self.psum_summable));
        ps.push(
            "witness",
            self.psum_witness
                .as_deref()
                .map_or(Json::Null, Json::from_str_slice),
        );
        ps.push("sum", Json::opt_matrix(self.psum_sum.as_ref()));
        ps.push(
            "max_ginv_deviation",
            Json::opt_float(self.psum_max_ginv_deviation),
        );
        root.push("parallel_sum", ps);

        let mut pinv = Json::object();
        pinv.push("a", Json::matrix(&self.pinv_a));
        pinv.push("b", Json::matrix(&self.pinv_b));
        pinv.push("sum", Json::matrix(&self.pinv_sum));
        root.push("pinv", pinv);

        let mut core_inv = Json::object();
        core_inv.push("a", Json::opt_matrix(self.core_inv_a.as_ref()));
        core_inv.push("b", Json::opt_matrix(self.core_inv_b.as_ref()));
        core_inv.push("sum", Json::opt_matrix(self.core_inv_sum.as_ref()));
        root.push("core_inverse", core_inv);

        let mut skipped = Json::object();
        for (k, v) in &self.skipped {
            skipped.push(k, Json::from_str_slice(v));
        }
        root.push("skipped", skipped);

        root
    }
}
