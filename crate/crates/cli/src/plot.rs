//! Static SVG figures: one circle per set, arcs and points marked in red.

use std::collections::BTreeMap;

use rotalg_core::circle_sets::CircleSet;
use rotalg_core::diophantine::Angle;
use rotalg_core::ideal_calculus::Certificate;

pub fn set_svg(set: &CircleSet, angle: &Angle, size: u32) -> String {
    set.to_svg(angle, size)
}

/// A row of circles, one per index, labelled with the index and marked
/// `*` where the value is only an upper bound.
pub fn ideal_svg(values: &BTreeMap<i64, (CircleSet, Certificate)>, angle: &Angle, size: u32) -> String {
    let cell = size;
    let label = 18;
    let columns = values.len().clamp(1, 9) as u32;
    let rows = (values.len() as u32).div_ceil(columns).max(1);
    let width = columns * cell;
    let height = rows * (cell + label);
    let mut body = String::new();
    for (i, (n, (set, cert))) in values.iter().enumerate() {
        let (col, row) = (i as u32 % columns, i as u32 / columns);
        let (x, y) = (col * cell, row * (cell + label));
        let inner = set.to_svg(angle, cell).replacen("<svg ", &format!("<svg x=\"{x}\" y=\"{y}\" "), 1);
        body.push_str(&inner);
        let mark = if cert.is_exact() { "" } else { "*" };
        body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">n = {n}{mark}</text>\n",
            x + cell / 2,
            y + cell + label - 5
        ));
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n{body}</svg>\n"
    )
}
