//! Report-style checks over chain-level constructions.

use super::complex::{cone, cone_from_data, cone_to_data, hom_complex, tot, Bicomplex, ChainComplex, ChainMap, Homotopy};
use super::homology::{cone_is_acyclic, is_quasi_iso};
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::star::{star_multiply, unsigned_cone_matrix, BlockGradedMatrix};
use crate::report::Report;

fn squares_to_zero(c: &ChainComplex, what: &str, report: &mut Report) {
    for n in c.lo() + 1..=c.hi() {
        report.require((&c.d(n - 1) * &c.d(n)).is_zero(), || format!("{what}: d∘d ≠ 0 at degree {n}"));
    }
}

/// `d² = 0` on the cone and the hom complex, and the unsigned cone matrix
/// squares to zero under `⋆` but equals `N·D·N` entrywise.
pub fn check_cone_signs(f: &ChainMap) -> Report {
    let mut report = Report::new("cone-signs");
    squares_to_zero(&cone(f).complex, "cone", &mut report);
    squares_to_zero(hom_complex(f.source(), f.target()).complex(), "hom complex", &mut report);
    let n = unsigned_cone_matrix(f);
    match star_multiply(&n, &n) {
        Ok(sq) => {
            report.require(sq.is_zero(), || "unsigned cone matrix does not ⋆-square to zero".into());
            let d = BlockGradedMatrix::sign_matrix(n.cols());
            report.require(*sq.matrix() == &(n.matrix() * &d) * n.matrix(), || "⋆ differs from N·D·N".into());
        }
        Err(e) => report.fail(e.to_string()),
    }
    report
}

/// Both quasi-isomorphism routes agree and `χ(Cone f) = χ(B) − χ(A)`.
pub fn check_quasi_iso(f: &ChainMap) -> Report {
    let mut report = Report::new("quasi-iso");
    let (direct, via_cone) = (is_quasi_iso(f), cone_is_acyclic(f));
    report.require(direct == via_cone, || format!("homology route says {direct}, cone route says {via_cone}"));
    let (chi_cone, chi_a, chi_b) = (cone(f).complex.euler_char(), f.source().euler_char(), f.target().euler_char());
    report.require(chi_cone == chi_b - chi_a, || format!("χ(cone) = {chi_cone} but χ(B) − χ(A) = {}", chi_b - chi_a));
    report
}

/// `to_data ∘ from_data` on `(g, H)` and `from_data ∘ to_data` on `φ` are
/// identities.
pub fn check_cone_bijection(f: &ChainMap, g: &ChainMap, h: &Homotopy, phi: &ChainMap) -> Report {
    let mut report = Report::new("cone-bijection");
    match cone_from_data(f, g, h).and_then(|p| cone_to_data(f, &p)) {
        Ok((g2, h2)) => report.require(&g2 == g && &h2 == h, || "to_data(from_data(g, H)) ≠ (g, H)".into()),
        Err(e) => report.fail(format!("from (g, H): {e}")),
    }
    match cone_to_data(f, phi).and_then(|(g, h)| cone_from_data(f, &g, &h)) {
        Ok(back) => report.require(&back == phi, || "from_data(to_data(φ)) ≠ φ".into()),
        Err(e) => report.fail(format!("from φ: {e}")),
    }
    report
}

pub fn check_snf(m: &IntMatrix) -> Report {
    let mut report = Report::new("snf");
    if let Err(e) = smith_normal_form(m).verify() {
        report.fail(e);
    }
    report
}

/// `d² = 0` on `Tot` and `χ(Tot) = Σ (−1)^i χ(X_i)`.
pub fn check_tot_euler(x: &Bicomplex) -> Report {
    let mut report = Report::new("tot-euler");
    let t = tot(x);
    squares_to_zero(&t, "tot", &mut report);
    let alt: i64 = x.terms().iter().enumerate().map(|(i, c)| if i % 2 == 0 { c.euler_char() } else { -c.euler_char() }).sum();
    report.require(t.euler_char() == alt, || format!("χ(Tot) = {} but the alternating sum is {alt}", t.euler_char()));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_pass_on_small_maps() {
        let c = ChainComplex::new(0, 1, vec![1, 1], vec![IntMatrix::zeros(0, 1), IntMatrix::from_rows(&[vec![2]])]).unwrap();
        let f = ChainMap::scalar(&c, 2);
        assert!(check_cone_signs(&f).passed);
        assert!(check_quasi_iso(&f).passed);
        let b = Bicomplex::new(vec![c.clone(), c.clone()], vec![f]).unwrap();
        assert!(check_tot_euler(&b).passed);
        assert!(check_snf(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]])).passed);
    }
}
