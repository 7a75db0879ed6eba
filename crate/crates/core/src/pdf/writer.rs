//! Minimal PDF writer for authoring fixture documents.
//!
//! Coordinates passed to the builder use the same top-left origin as the
//! extractor, so a span written at `(x, baseline)` comes back with
//! `bbox.x0 == x` and `Span::baseline() == baseline`.

use std::path::Path;

use lopdf::{dictionary, Document, Object, ObjectId, Stream, StringFormat};

use super::fonts::{HELVETICA, HELVETICA_BOLD, MONO_WIDTH};
use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StdFont {
    Helvetica,
    HelveticaBold,
    HelveticaOblique,
    Courier,
}

impl StdFont {
    const ALL: [StdFont; 4] = [
        StdFont::Helvetica,
        StdFont::HelveticaBold,
        StdFont::HelveticaOblique,
        StdFont::Courier,
    ];

    fn resource_name(self) -> &'static str {
        match self {
            StdFont::Helvetica => "F1",
            StdFont::HelveticaBold => "F2",
            StdFont::HelveticaOblique => "F3",
            StdFont::Courier => "F4",
        }
    }

    pub fn base_name(self) -> &'static str {
        match self {
            StdFont::Helvetica => "Helvetica",
            StdFont::HelveticaBold => "Helvetica-Bold",
            StdFont::HelveticaOblique => "Helvetica-Oblique",
            StdFont::Courier => "Courier",
        }
    }

    fn glyph_width(self, c: char) -> f64 {
        let code = c as u32;
        let idx = if (32..=126).contains(&code) { (code - 32) as usize } else { b'?' as usize - 32 };
        match self {
            StdFont::Courier => MONO_WIDTH as f64,
            StdFont::HelveticaBold => HELVETICA_BOLD[idx] as f64,
            _ => HELVETICA[idx] as f64,
        }
    }

    /// Rendered width of `text` at `size` points.
    pub fn text_width(self, text: &str, size: f64) -> f64 {
        text.chars().map(|c| self.glyph_width(c)).sum::<f64>() * size / 1000.0
    }
}

#[derive(Debug, Clone)]
struct OutlineItem {
    title: String,
    level: u32,
    page: usize,
}

#[derive(Debug, Clone)]
pub struct PageBuilder {
    width: f64,
    height: f64,
    content: String,
    links: Vec<(Rect, String)>,
}

fn escape_pdf_text(text: &str) -> Vec<u8> {
    text.chars()
        .map(|c| {
            let code = c as u32;
            if (32..=126).contains(&code) || (160..=255).contains(&code) {
                code as u8
            } else {
                b'?'
            }
        })
        .collect()
}

fn literal(bytes: &[u8]) -> String {
    let mut out = String::from("(");
    for &b in bytes {
        match b {
            b'(' | b')' | b'\\' => {
                out.push('\\');
                out.push(b as char);
            }
            32..=126 => out.push(b as char),
            _ => out.push_str(&format!("\\{b:03o}")),
        }
    }
    out.push(')');
    out
}

impl PageBuilder {
    fn flip(&self, y: f64) -> f64 {
        self.height - y
    }

    /// Places a single text run with its baseline at `baseline` (top-left origin).
    pub fn text(&mut self, x: f64, baseline: f64, size: f64, font: StdFont, text: &str) -> &mut Self {
        let y = self.flip(baseline);
        self.content.push_str(&format!(
            "BT /{} {size:.3} Tf 1 0 0 1 {x:.3} {y:.3} Tm {} Tj ET\n",
            font.resource_name(),
            literal(&escape_pdf_text(text))
        ));
        self
    }

    /// Places text rotated 90° counter-clockwise around its origin.
    pub fn rotated_text(&mut self, x: f64, baseline: f64, size: f64, font: StdFont, text: &str) -> &mut Self {
        let y = self.flip(baseline);
        self.content.push_str(&format!(
            "BT /{} {size:.3} Tf 0 1 -1 0 {x:.3} {y:.3} Tm {} Tj ET\n",
            font.resource_name(),
            literal(&escape_pdf_text(text))
        ));
        self
    }

    /// Greedy word wrap inside `width`; returns the baseline after the last line.
    #[allow(clippy::too_many_arguments)]
    pub fn paragraph(
        &mut self,
        x: f64,
        baseline: f64,
        width: f64,
        size: f64,
        leading: f64,
        font: StdFont,
        text: &str,
    ) -> f64 {
        let mut y = baseline;
        for line in wrap_words(text, width, size, font) {
            self.text(x, y, size, font, &line);
            y += leading;
        }
        y
    }

    /// Stroked straight segment.
    pub fn line(&mut self, p0: Point, p1: Point, stroke_width: f64) -> &mut Self {
        self.content.push_str(&format!(
            "{stroke_width:.3} w {:.3} {:.3} m {:.3} {:.3} l S\n",
            p0.x,
            self.flip(p0.y),
            p1.x,
            self.flip(p1.y)
        ));
        self
    }

    /// Stroked rectangle outline.
    pub fn rect(&mut self, r: Rect, stroke_width: f64) -> &mut Self {
        self.content.push_str(&format!(
            "{stroke_width:.3} w {:.3} {:.3} {:.3} {:.3} re S\n",
            r.x0,
            self.flip(r.y1),
            r.width(),
            r.height()
        ));
        self
    }

    /// URI link annotation covering `r`.
    pub fn link(&mut self, r: Rect, uri: &str) -> &mut Self {
        self.links.push((r, uri.to_string()));
        self
    }

    pub fn size(&self) -> (f64, f64) {
        (self.width, self.height)
    }
}

/// Splits `text` into lines no wider than `width`, breaking only at spaces.
pub fn wrap_words(text: &str, width: f64, size: f64, font: StdFont) -> Vec<String> {
    let mut lines = Vec::new();
    let mut current = String::new();
    for word in text.split_whitespace() {
        let candidate = if current.is_empty() {
            word.to_string()
        } else {
            format!("{current} {word}")
        };
        if !current.is_empty() && font.text_width(&candidate, size) > width {
            lines.push(std::mem::take(&mut current));
            current = word.to_string();
        } else {
            current = candidate;
        }
    }
    if !current.is_empty() {
        lines.push(current);
    }
    lines
}

#[derive(Debug, Clone, Default)]
pub struct PdfBuilder {
    pages: Vec<PageBuilder>,
    outline: Vec<OutlineItem>,
    compress: bool,
}

impl PdfBuilder {
    pub fn new() -> Self {
        Self {
            compress: true,
            ..Default::default()
        }
    }

    /// Appends a page and returns it for drawing.
    pub fn add_page(&mut self, width: f64, height: f64) -> &mut PageBuilder {
        self.pages.push(PageBuilder {
            width,
            height,
            content: String::new(),
            links: Vec::new(),
        });
        self.pages.last_mut().expect("just pushed")
    }

    pub fn page(&mut self, index: usize) -> &mut PageBuilder {
        &mut self.pages[index]
    }

    pub fn page_count(&self) -> usize {
        self.pages.len()
    }

    /// Adds an outline entry. Entries must be given in document order.
    pub fn outline(&mut self, title: &str, level: u32, page: usize) -> &mut Self {
        self.outline.push(OutlineItem {
            title: title.to_string(),
            level: level.max(1),
            page,
        });
        self
    }

    pub fn compress(&mut self, on: bool) -> &mut Self {
        self.compress = on;
        self
    }

    pub fn to_document(&self) -> Document {
        let mut doc = Document::with_version("1.5");
        let pages_id = doc.new_object_id();

        let mut fonts = lopdf::Dictionary::new();
        for f in StdFont::ALL {
            let widths: Vec<Object> = (32u8..=126)
                .map(|c| Object::Real(f.glyph_width(c as char) as f32))
                .collect();
            let font_id = doc.add_object(dictionary! {
                "Type" => "Font",
                "Subtype" => "Type1",
                "BaseFont" => f.base_name(),
                "Encoding" => "WinAnsiEncoding",
                "FirstChar" => 32,
                "LastChar" => 126,
                "Widths" => widths,
            });
            fonts.set(f.resource_name(), font_id);
        }
        let resources_id = doc.add_object(dictionary! { "Font" => fonts });

        let mut page_ids: Vec<ObjectId> = Vec::with_capacity(self.pages.len());
        for page in &self.pages {
            let content_id = doc.add_object(Stream::new(dictionary! {}, page.content.clone().into_bytes()));
            let mut page_dict = dictionary! {
                "Type" => "Page",
                "Parent" => pages_id,
                "MediaBox" => vec![0.into(), 0.into(), Object::Real(page.width as f32), Object::Real(page.height as f32)],
                "Contents" => content_id,
                "Resources" => resources_id,
            };
            if !page.links.is_empty() {
                let annots: Vec<Object> = page
                    .links
                    .iter()
                    .map(|(r, uri)| {
                        let annot = dictionary! {
                            "Type" => "Annot",
                            "Subtype" => "Link",
                            "Rect" => vec![
                                Object::Real(r.x0 as f32),
                                Object::Real((page.height - r.y1) as f32),
                                Object::Real(r.x1 as f32),
                                Object::Real((page.height - r.y0) as f32),
                            ],
                            "Border" => vec![0.into(), 0.into(), 0.into()],
                            "A" => dictionary! {
                                "S" => "URI",
                                "URI" => Object::String(uri.as_bytes().to_vec(), StringFormat::Literal),
                            },
                        };
                        Object::Reference(doc.add_object(annot))
                    })
                    .collect();
                page_dict.set("Annots", annots);
            }
            page_ids.push(doc.add_object(page_dict));
        }
        doc.objects.insert(
            pages_id,
            Object::Dictionary(dictionary! {
                "Type" => "Pages",
                "Kids" => page_ids.iter().map(|id| Object::Reference(*id)).collect::<Vec<_>>(),
                "Count" => self.pages.len() as i64,
            }),
        );

        let mut catalog = dictionary! { "Type" => "Catalog", "Pages" => pages_id };
        if let Some(outlines_id) = self.write_outline(&mut doc, &page_ids) {
            catalog.set("Outlines", outlines_id);
        }
        let catalog_id = doc.add_object(catalog);
        doc.trailer.set("Root", catalog_id);
        if self.compress {
            doc.compress();
        }
        doc
    }

    fn write_outline(&self, doc: &mut Document, page_ids: &[ObjectId]) -> Option<ObjectId> {
        if self.outline.is_empty() {
            return None;
        }
        let root_id = doc.new_object_id();
        let ids: Vec<ObjectId> = self.outline.iter().map(|_| doc.new_object_id()).collect();
        // parent index per item: nearest previous item with a smaller level.
        let mut parents: Vec<Option<usize>> = Vec::with_capacity(self.outline.len());
        let mut stack: Vec<usize> = Vec::new();
        for (i, item) in self.outline.iter().enumerate() {
            while stack.last().is_some_and(|&p| self.outline[p].level >= item.level) {
                stack.pop();
            }
            parents.push(stack.last().copied());
            stack.push(i);
        }
        let children_of = |parent: Option<usize>| -> Vec<usize> {
            (0..self.outline.len()).filter(|&i| parents[i] == parent).collect()
        };
        let mut dicts: Vec<lopdf::Dictionary> = Vec::new();
        for (i, item) in self.outline.iter().enumerate() {
            let siblings = children_of(parents[i]);
            let pos = siblings.iter().position(|&s| s == i).expect("self in siblings");
            let page_id = page_ids[item.page.min(page_ids.len().saturating_sub(1))];
            let mut d = dictionary! {
                "Title" => Object::String(item.title.as_bytes().to_vec(), StringFormat::Literal),
                "Parent" => parents[i].map(|p| ids[p]).unwrap_or(root_id),
                "Dest" => vec![Object::Reference(page_id), "XYZ".into(), Object::Null, Object::Null, Object::Null],
            };
            if pos > 0 {
                d.set("Prev", ids[siblings[pos - 1]]);
            }
            if pos + 1 < siblings.len() {
                d.set("Next", ids[siblings[pos + 1]]);
            }
            let kids = children_of(Some(i));
            if let (Some(first), Some(last)) = (kids.first(), kids.last()) {
                d.set("First", ids[*first]);
                d.set("Last", ids[*last]);
                d.set("Count", kids.len() as i64);
            }
            dicts.push(d);
        }
        for (id, d) in ids.iter().zip(dicts) {
            doc.objects.insert(*id, Object::Dictionary(d));
        }
        let top = children_of(None);
        doc.objects.insert(
            root_id,
            Object::Dictionary(dictionary! {
                "Type" => "Outlines",
                "First" => ids[top[0]],
                "Last" => ids[*top.last().expect("non-empty")],
                "Count" => top.len() as i64,
            }),
        );
        Some(root_id)
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.to_document()
            .save_to(&mut buf)
            .map_err(|e| Error::MalformedPdf(e.to_string()))?;
        Ok(buf)
    }

    /// Serializes with a standard security handler declared in the trailer
    /// but no usable keys. Readers must treat the result as encrypted.
    pub fn to_encrypted_stub_bytes(&self) -> Result<Vec<u8>> {
        let mut doc = self.to_document();
        let encrypt_id = doc.add_object(dictionary! {
            "Filter" => "Standard",
            "V" => 1,
            "R" => 2,
            "Length" => 40,
            "P" => -4,
            "O" => Object::String(vec![0x11; 32], StringFormat::Hexadecimal),
            "U" => Object::String(vec![0x22; 32], StringFormat::Hexadecimal),
        });
        doc.trailer.set("Encrypt", encrypt_id);
        doc.trailer.set(
            "ID",
            vec![
                Object::String(vec![0x33; 16], StringFormat::Hexadecimal),
                Object::String(vec![0x33; 16], StringFormat::Hexadecimal),
            ],
        );
        let mut buf = Vec::new();
        doc.save_to(&mut buf).map_err(|e| Error::MalformedPdf(e.to_string()))?;
        Ok(buf)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes()?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_respects_width() {
        let text = "alpha beta gamma delta epsilon zeta eta theta iota kappa";
        let lines = wrap_words(text, 100.0, 10.0, StdFont::Helvetica);
        assert!(lines.len() > 1);
        for l in &lines {
            assert!(StdFont::Helvetica.text_width(l, 10.0) <= 100.0 || !l.contains(' '));
        }
        assert_eq!(lines.join(" "), text);
    }

    #[test]
    fn literal_escapes_delimiters() {
        assert_eq!(literal(b"a(b)\\"), "(a\\(b\\)\\\\)");
    }

    #[test]
    fn builds_loadable_document() {
        let mut b = PdfBuilder::new();
        b.add_page(612.0, 792.0).text(72.0, 100.0, 12.0, StdFont::Helvetica, "Hi");
        b.outline("Intro", 1, 0);
        let bytes = b.to_bytes().unwrap();
        let doc = Document::load_mem(&bytes).unwrap();
        assert_eq!(doc.get_pages().len(), 1);
    }
}
