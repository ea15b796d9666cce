//! Deterministic figures: log-3 step plots, steeple strips and interval
//! bitmaps (Cantor iterations and the unit-case ones set).
//!
//! Plot models hold exact integer levels. Scaling only happens when SVG is
//! written: the document has a fixed 900x300 canvas and a `viewBox` in data
//! units, so every coordinate is an integer.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::crossdiff::{extract_steeple, log3_exact, unit_row_by_rule, CrossDiffError, CrossDiffRow};
use crate::oracle::{unit_exponent_of_digits, TernaryIndex};

pub const CANVAS_WIDTH: u32 = 900;
pub const CANVAS_HEIGHT: u32 = 300;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("value {value} at index {index} is not a power of 3")]
    NotPowerOfThree { index: usize, value: BigUint },
    #[error(transparent)]
    CrossDiff(#[from] CrossDiffError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
}

/// Integer base-3 logarithms of a cross-difference row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepPlot {
    pub n: u32,
    pub levels: Vec<u32>,
}

/// `3^n` equal subintervals of `[0, 1]`, each marked or not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalBitmap {
    pub n: u32,
    pub bits: Vec<bool>,
}

/// Bitmaps of depth `0..=n` drawn one above the other, as in the classic
/// Cantor-set picture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitmapStack {
    pub layers: Vec<IntervalBitmap>,
}

pub fn step_plot(row: &CrossDiffRow) -> Result<StepPlot, RenderError> {
    let levels = row
        .values()
        .iter()
        .enumerate()
        .map(|(index, value)| {
            log3_exact(value).ok_or_else(|| RenderError::NotPowerOfThree { index, value: value.clone() })
        })
        .collect::<Result<_, _>>()?;
    Ok(StepPlot { n: row.n(), levels })
}

fn ternary_digits(i: usize, width: u32) -> Vec<u8> {
    TernaryIndex::new(BigUint::from(i), width as usize).expect("index below 3^width").digits().to_vec()
}

/// Marks the indices whose width-`n` ternary spelling has no digit 1.
pub fn cantor_bitmap(n: u32) -> IntervalBitmap {
    let bits = (0..3usize.pow(n)).map(|i| !ternary_digits(i, n).contains(&1)).collect();
    IntervalBitmap { n, bits }
}

/// Marks the indices where the unit-case cross-difference is 1.
pub fn ones_bitmap(n: u32) -> IntervalBitmap {
    let bits = (0..3usize.pow(n)).map(|i| unit_exponent_of_digits(&ternary_digits(i, n)) == 0).collect();
    IntervalBitmap { n, bits }
}

pub fn cantor_stack(n: u32) -> BitmapStack {
    BitmapStack { layers: (0..=n).map(cantor_bitmap).collect() }
}

pub fn ones_stack(n: u32) -> BitmapStack {
    BitmapStack { layers: (0..=n).map(ones_bitmap).collect() }
}

/// Log-3 steeples of rows `1..=max_n`, separated by a single 0.
pub fn steeple_strip(max_n: u32) -> Result<StepPlot, RenderError> {
    let mut row = CrossDiffRow::seed();
    let mut levels = Vec::new();
    for n in 1..=max_n {
        row = crate::crossdiff::propagate_unit(&row)?;
        if n > 1 {
            levels.push(0);
        }
        let steeple = extract_steeple(&row)?;
        levels.extend(steeple.values.iter().map(|v| log3_exact(v).expect("unit rows hold powers of 3")));
    }
    Ok(StepPlot { n: max_n, levels })
}

/// Step plot of `C_n` computed by the propagation rule.
pub fn unit_step_plot(n: u32) -> Result<StepPlot, RenderError> {
    step_plot(&unit_row_by_rule(n)?)
}

fn level_char(level: u32) -> char {
    match level {
        0..=9 => char::from(b'0' + level as u8),
        10..=35 => char::from(b'a' + (level - 10) as u8),
        _ => '+',
    }
}

/// Maximal runs `(start, len)` of equal items.
fn runs<T: PartialEq>(items: &[T]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, item) in items.iter().enumerate() {
        match out.last_mut() {
            Some((start, len)) if items[*start] == *item => *len += 1,
            _ => out.push((i, 1)),
        }
        let _ = i;
    }
    out
}

fn svg_open(out: &mut String, view_width: usize, view_height: usize) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS_WIDTH}" height="{CANVAS_HEIGHT}" viewBox="0 0 {view_width} {view_height}" preserveAspectRatio="none">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{view_width}" height="{view_height}" fill="white"/>"#);
}

fn svg_close(out: &mut String) {
    out.push_str("</svg>\n");
}

pub trait Figure {
    fn to_svg(&self) -> String;
    fn to_text(&self) -> String;
}

impl Figure for StepPlot {
    /// One filled bar per run of equal level; a level-`L` bar is `L + 1`
    /// units tall so the zero level stays visible.
    fn to_svg(&self) -> String {
        let top = self.levels.iter().copied().max().unwrap_or(0) as usize + 1;
        let mut out = String::new();
        svg_open(&mut out, self.levels.len().max(1), top);
        for (start, len) in runs(&self.levels) {
            let h = self.levels[start] as usize + 1;
            let _ = writeln!(out, r#"<rect x="{start}" y="{}" width="{len}" height="{h}" fill="black"/>"#, top - h);
        }
        svg_close(&mut out);
        out
    }

    fn to_text(&self) -> String {
        let mut s: String = self.levels.iter().map(|&l| level_char(l)).collect();
        s.push('\n');
        s
    }
}

impl IntervalBitmap {
    pub fn marked(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    fn marked_runs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        runs(&self.bits).into_iter().filter(|&(start, _)| self.bits[start])
    }

    fn pattern(&self, stretch: usize) -> String {
        self.bits.iter().flat_map(|&b| std::iter::repeat_n(if b { '#' } else { '.' }, stretch)).collect()
    }
}

impl Figure for IntervalBitmap {
    /// One rectangle per maximal run of marked intervals.
    fn to_svg(&self) -> String {
        let mut out = String::new();
        svg_open(&mut out, self.bits.len(), 1);
        for (start, len) in self.marked_runs() {
            let _ = writeln!(out, r#"<rect x="{start}" y="0" width="{len}" height="1" fill="black"/>"#);
        }
        svg_close(&mut out);
        out
    }

    fn to_text(&self) -> String {
        let mut s = self.pattern(1);
        s.push('\n');
        s
    }
}

impl Figure for BitmapStack {
    /// Layer `j` sits at `y = 2j`, stretched to the width of the deepest layer.
    fn to_svg(&self) -> String {
        let width = self.layers.iter().map(|l| l.bits.len()).max().unwrap_or(1);
        let mut out = String::new();
        svg_open(&mut out, width, (2 * self.layers.len()).saturating_sub(1).max(1));
        for (j, layer) in self.layers.iter().enumerate() {
            let scale = width / layer.bits.len();
            for (start, len) in layer.marked_runs() {
                let _ = writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="{}" height="1" fill="black"/>"#,
                    start * scale,
                    2 * j,
                    len * scale
                );
            }
        }
        svg_close(&mut out);
        out
    }

    fn to_text(&self) -> String {
        let width = self.layers.iter().map(|l| l.bits.len()).max().unwrap_or(1);
        self.layers.iter().map(|l| l.pattern(width / l.bits.len()) + "\n").collect()
    }
}

/// Writes the figure's SVG to `path`. Identical figures give identical bytes.
pub fn emit_svg(figure: &impl Figure, path: &Path) -> Result<(), RenderError> {
    std::fs::write(path, figure.to_svg()).map_err(|source| RenderError::Io { path: path.display().to_string(), source })
}

pub fn emit_text(figure: &impl Figure, path: &Path) -> Result<(), RenderError> {
    std::fs::write(path, figure.to_text())
        .map_err(|source| RenderError::Io { path: path.display().to_string(), source })
}

/// True when every value of the row is 1.
pub fn all_ones(row: &CrossDiffRow) -> bool {
    row.values().iter().all(One::is_one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{a_seq, b_seq};
    use crate::crossdiff::no_reduction_row;

    fn c(n: u32, v: &[u64]) -> CrossDiffRow {
        CrossDiffRow::from_u64(n, v)
    }

    #[test]
    fn step_plot_examples() {
        let p = step_plot(&c(2, &[1, 3, 1, 3, 9, 3, 1, 3, 1])).unwrap();
        assert_eq!(p.levels, vec![0, 1, 0, 1, 2, 1, 0, 1, 0]);
        assert_eq!(step_plot(&CrossDiffRow::seed()).unwrap().levels, vec![0]);
        let p3 = unit_step_plot(3).unwrap();
        assert_eq!(p3.levels, vec![0, 1, 0, 1, 2, 1, 0, 1, 0, 0, 0, 0, 2, 3, 2, 0, 0, 0, 0, 1, 0, 1, 2, 1, 0, 1, 0]);
        assert!(matches!(step_plot(&c(1, &[1, 5, 1])), Err(RenderError::NotPowerOfThree { index: 1, .. })));
    }

    #[test]
    fn bitmap_examples() {
        assert_eq!(cantor_bitmap(1).bits, vec![true, false, true]);
        assert_eq!(cantor_bitmap(0).bits, vec![true]);
        assert_eq!(cantor_bitmap(2).bits, vec![true, false, true, false, false, false, true, false, true]);
        assert_eq!(ones_bitmap(1).bits, vec![true, false, true]);
        assert_eq!(ones_bitmap(3).marked(), 14);
    }

    #[test]
    fn bitmap_cardinalities_and_inclusion() {
        for n in 0..=9 {
            let cantor = cantor_bitmap(n);
            let ones = ones_bitmap(n);
            assert_eq!(cantor.marked(), 1 << n);
            let predicted = b_seq(n) + a_seq(n) / 2u32;
            assert_eq!(BigUint::from(ones.marked()), predicted);
            assert!(cantor.bits.iter().zip(&ones.bits).all(|(c, o)| !c || *o));
        }
    }

    #[test]
    fn steeple_strip_examples() {
        assert_eq!(steeple_strip(1).unwrap().levels, vec![1]);
        assert_eq!(steeple_strip(2).unwrap().levels, vec![1, 0, 1, 2, 1]);
        assert_eq!(steeple_strip(3).unwrap().levels, vec![1, 0, 1, 2, 1, 0, 2, 3, 2]);
    }

    #[test]
    fn no_reduction_self_similarity() {
        for n in 0..7 {
            let this = step_plot(&no_reduction_row(n).unwrap()).unwrap().levels;
            let next = step_plot(&no_reduction_row(n + 1).unwrap()).unwrap().levels;
            let t = this.len();
            assert_eq!(next[..t], this[..]);
            assert_eq!(next[2 * t..], this[..]);
            assert!(next[t..2 * t].iter().zip(&this).all(|(m, l)| *m == l + 1));
        }
    }

    #[test]
    fn unit_prefix_property() {
        for n in 1..8 {
            let prev = unit_step_plot(n - 1).unwrap().levels;
            let this = unit_step_plot(n).unwrap().levels;
            assert_eq!(this[..prev.len()], prev[..]);
        }
    }

    #[test]
    fn text_renderers() {
        assert_eq!(unit_step_plot(2).unwrap().to_text(), "010121010\n");
        assert_eq!(cantor_bitmap(2).to_text(), "#.#...#.#\n");
        assert_eq!(cantor_stack(1).to_text(), "###\n#.#\n");
        assert_eq!(level_char(10), 'a');
        assert_eq!(level_char(12), 'c');
    }

    #[test]
    fn svg_rectangles() {
        let svg = cantor_bitmap(3).to_svg();
        assert_eq!(svg.matches("fill=\"black\"").count(), 8);
        let svg = ones_bitmap(0).to_svg();
        assert_eq!(svg.matches("fill=\"black\"").count(), 1);
        assert!(svg.contains(r#"<rect x="0" y="0" width="1" height="1" fill="black"/>"#));
        assert!(svg.contains(r#"width="900" height="300""#));
    }

    #[test]
    fn runs_split_on_change() {
        assert_eq!(runs(&[1, 1, 2, 1]), vec![(0, 2), (2, 1), (3, 1)]);
        assert!(runs::<u8>(&[]).is_empty());
    }
}
