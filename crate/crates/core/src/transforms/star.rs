use alloc::format;
use alloc::vec::Vec;

use crate::geometry::{cell_chords_in_ball, CellChord, LatticePoint, Ray};
use crate::{Error, LatticeField, Mat, Regime, Result};

fn check(f: &LatticeField, ray: &Ray) -> Result<()> {
    if f.regime() != Regime::Additive {
        return Err(Error::invalid("cell-chord transform needs an additive field"));
    }
    if ray.dim() != f.d() {
        return Err(Error::invalid("ray dimension does not match the field"));
    }
    Ok(())
}

fn chord_product<'a>(f: &LatticeField, chords: impl Iterator<Item = &'a CellChord>) -> Mat {
    let mut acc = Mat::identity(f.n());
    for c in chords {
        if let Some(v) = f.get(&c.cell) {
            acc = &v.scale_real(c.length).exp() * &acc;
        }
    }
    acc
}

/// Transform of the piecewise-constant extension of `f`: the ordered product of
/// `exp(|γ ∩ U_ζ| f(ζ))` over the cells the ray crosses.
pub fn star_transform(f: &LatticeField, ray: &Ray) -> Result<Mat> {
    check(f, ray)?;
    let chords = cell_chords_in_ball(ray, f.ball());
    Ok(chord_product(f, chords.iter()))
}

/// Splits the transform around the cell `pivot`: returns `(after, at, before)`
/// with `star_transform(f, ray) = after · at · before`.
pub fn star_split(f: &LatticeField, ray: &Ray, pivot: &LatticePoint) -> Result<(Mat, Mat, Mat)> {
    check(f, ray)?;
    let chords = cell_chords_in_ball(ray, f.ball());
    let k = chords
        .iter()
        .position(|c| &c.cell == pivot)
        .ok_or_else(|| Error::invalid(format!("ray {ray} does not cross cell {pivot}")))?;
    let before = chord_product(f, chords[..k].iter());
    let at = f.value_at(pivot).scale_real(chords[k].length).exp();
    let after = chord_product(f, chords[k + 1..].iter());
    Ok((after, at, before))
}

/// Value of the piecewise-constant extension at `x`, cells being `[-1/2, 1/2)^d + ζ`.
pub fn piecewise_constant_value(f: &LatticeField, x: &[f64]) -> Mat {
    let cell = LatticePoint(x.iter().map(|&c| libm::floor(c + 0.5) as i64).collect::<Vec<_>>());
    if f.ball().contains(&cell) {
        f.value_at(&cell)
    } else {
        Mat::zeros(f.n())
    }
}
