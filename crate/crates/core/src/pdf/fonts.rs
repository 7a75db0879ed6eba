//! Font metrics and style flags.

use std::collections::HashMap;

/// Advance widths (1/1000 em) of printable ASCII 32..=126 for Helvetica.
pub(crate) const HELVETICA: [u16; 95] = [
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278, // 32-47
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 278, 278, 584, 584, 584, 556, // 48-63
    1015, 667, 667, 722, 722, 667, 611, 778, 722, 278, 500, 667, 556, 833, 722, 778, // 64-79
    667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611, 278, 278, 278, 469, 556, // 80-95
    333, 556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500, 222, 833, 556, 556, // 96-111
    556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584, // 112-126
];

/// Advance widths of printable ASCII 32..=126 for Helvetica-Bold.
pub(crate) const HELVETICA_BOLD: [u16; 95] = [
    278, 333, 474, 556, 556, 889, 722, 238, 333, 333, 389, 584, 278, 333, 278, 278, // 32-47
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 333, 333, 584, 584, 584, 611, // 48-63
    975, 722, 722, 722, 722, 667, 611, 778, 722, 278, 556, 722, 611, 833, 722, 778, // 64-79
    667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611, 333, 278, 333, 584, 556, // 80-95
    333, 556, 611, 556, 611, 556, 333, 611, 611, 278, 278, 556, 278, 889, 611, 611, // 96-111
    611, 611, 389, 556, 333, 611, 556, 778, 556, 556, 500, 389, 280, 389, 584, // 112-126
];

pub(crate) const MONO_WIDTH: u16 = 600;
const DEFAULT_WIDTH: f64 = 500.0;

/// Width table for one of the standard fonts, by base name.
pub(crate) fn standard_width(base_font: &str, code: u32) -> Option<f64> {
    let lower = base_font.to_ascii_lowercase();
    if lower.contains("courier") || lower.contains("mono") {
        return Some(MONO_WIDTH as f64);
    }
    let table = if style_from_name(base_font).0 {
        &HELVETICA_BOLD
    } else {
        &HELVETICA
    };
    match code {
        32..=126 => Some(table[(code - 32) as usize] as f64),
        _ => None,
    }
}

/// `(bold, italic, mono)` inferred from a font name.
pub(crate) fn style_from_name(name: &str) -> (bool, bool, bool) {
    let lower = name.to_ascii_lowercase();
    let bold = ["bold", "black", "heavy", "semibold", "demi"]
        .iter()
        .any(|k| lower.contains(k));
    let italic = lower.contains("italic") || lower.contains("oblique");
    let mono = lower.contains("mono") || lower.contains("courier");
    (bold, italic, mono)
}

const FLAG_FIXED_PITCH: i64 = 1;
const FLAG_ITALIC: i64 = 1 << 6;
const FLAG_FORCE_BOLD: i64 = 1 << 18;

/// `(bold, italic, mono)` from FontDescriptor flags and weight, if present.
pub(crate) fn style_from_flags(flags: Option<i64>, weight: Option<f64>) -> (bool, bool, bool) {
    let f = flags.unwrap_or(0);
    let bold = f & FLAG_FORCE_BOLD != 0 || weight.is_some_and(|w| w >= 600.0);
    (bold, f & FLAG_ITALIC != 0, f & FLAG_FIXED_PITCH != 0)
}

/// Strips a subset tag such as `ABCDEF+`.
pub(crate) fn clean_font_name(name: &str) -> String {
    match name.split_once('+') {
        Some((tag, rest)) if tag.len() == 6 && tag.chars().all(|c| c.is_ascii_uppercase()) => {
            rest.to_string()
        }
        _ => name.to_string(),
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Widths {
    Simple {
        first_char: u32,
        widths: Vec<f64>,
        missing: f64,
        base_font: String,
    },
    Cid {
        widths: HashMap<u32, f64>,
        default: f64,
    },
}

impl Widths {
    pub(crate) fn width(&self, code: u32) -> f64 {
        match self {
            Widths::Simple {
                first_char,
                widths,
                missing,
                base_font,
            } => {
                if code >= *first_char {
                    if let Some(w) = widths.get((code - first_char) as usize) {
                        return *w;
                    }
                }
                if widths.is_empty() {
                    if let Some(w) = standard_width(base_font, code) {
                        return w;
                    }
                }
                if *missing > 0.0 {
                    *missing
                } else {
                    DEFAULT_WIDTH
                }
            }
            Widths::Cid { widths, default } => widths.get(&code).copied().unwrap_or(*default),
        }
    }
}
