//! Content-stream interpretation on top of `lopdf`'s object model.
//!
//! Walks each page's operators with a small graphics/text state machine and
//! records positioned glyph runs, straight path segments, link annotations
//! and the document outline.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::rc::Rc;

use lopdf::content::Content;
use lopdf::Encoding;
use lopdf::{Dictionary, Document, Object, ObjectId};

use super::fonts::{clean_font_name, style_from_flags, style_from_name, Widths};
use super::{
    sort_spans, DrawSegment, LinkBox, MetadataTocEntry, RawDocument, Span, ASCENT_RATIO,
    DESCENT_RATIO,
};
use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};

const MAX_FORM_DEPTH: usize = 8;
/// Horizontal gap (in font-size units) above which a space is inserted.
const WORD_GAP: f64 = 0.15;
/// Horizontal gap (in font-size units) above which a new span starts.
const SPAN_GAP: f64 = 0.5;
/// Filled rectangles thinner than this are treated as drawn rules.
const RULE_THICKNESS: f64 = 2.0;

/// Reads a PDF file into raw spans, segments, links and outline.
pub fn extract_raw(pdf_path: impl AsRef<Path>) -> Result<RawDocument> {
    let path = pdf_path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    extract_with_origin(&bytes, path)
}

pub fn extract_raw_from_bytes(bytes: &[u8]) -> Result<RawDocument> {
    extract_with_origin(bytes, Path::new("<memory>"))
}

fn extract_with_origin(bytes: &[u8], origin: &Path) -> Result<RawDocument> {
    let has_encrypt_key = bytes.windows(8).any(|w| w == b"/Encrypt");
    let doc = match Document::load_mem(bytes) {
        Ok(doc) => doc,
        Err(_) if has_encrypt_key => return Err(Error::EncryptedPdf(origin.to_path_buf())),
        Err(e) => return Err(Error::MalformedPdf(e.to_string())),
    };
    if doc.is_encrypted() || doc.was_encrypted() {
        return Err(Error::EncryptedPdf(origin.to_path_buf()));
    }
    extract_document(&doc)
}

fn extract_document(doc: &Document) -> Result<RawDocument> {
    let pages: BTreeMap<u32, ObjectId> = doc.get_pages();
    let page_index: HashMap<ObjectId, usize> =
        pages.values().enumerate().map(|(i, id)| (*id, i)).collect();
    let mut raw = RawDocument {
        page_count: pages.len(),
        ..Default::default()
    };
    for (index, page_id) in pages.values().enumerate() {
        let media = media_box(doc, *page_id);
        raw.page_sizes.push((media.width(), media.height()));
        let links = page_links(doc, *page_id, index, &media);
        let mut page = PageExtractor::new(doc, index, media);
        page.link_rects = links.iter().map(|l| l.bbox).collect();
        let fonts = page_fonts(doc, *page_id);
        let resources = page_resources(doc, *page_id);
        let content = doc.get_page_content(*page_id);
        page.run(&content, &fonts, resources, 0)?;
        page.flush();
        raw.spans.extend(page.spans);
        raw.segments.extend(page.segments);
        raw.links.extend(links);
    }
    sort_spans(&mut raw.spans);
    raw.metadata_toc = outline(doc, &page_index);
    Ok(raw)
}

fn resolve<'a>(doc: &'a Document, obj: &'a Object) -> &'a Object {
    match obj {
        Object::Reference(id) => doc.get_object(*id).unwrap_or(obj),
        other => other,
    }
}

fn number(obj: &Object) -> Option<f64> {
    match obj {
        Object::Integer(i) => Some(*i as f64),
        Object::Real(r) => Some(*r as f64),
        _ => None,
    }
}

fn numbers(objs: &[Object]) -> Vec<f64> {
    objs.iter().filter_map(number).collect()
}

fn media_box(doc: &Document, page_id: ObjectId) -> Rect {
    let mut current = doc.get_dictionary(page_id).ok();
    let mut guard = 0;
    while let Some(dict) = current {
        if let Ok(arr) = dict.get(b"MediaBox").map(|o| resolve(doc, o)).and_then(Object::as_array) {
            let v = numbers(arr);
            if v.len() == 4 {
                return Rect::from_corners(Point::new(v[0], v[1]), Point::new(v[2], v[3]));
            }
        }
        guard += 1;
        current = dict
            .get(b"Parent")
            .and_then(Object::as_reference)
            .ok()
            .filter(|_| guard < 32)
            .and_then(|id| doc.get_dictionary(id).ok());
    }
    Rect::new(0.0, 0.0, 612.0, 792.0)
}

fn page_resources(doc: &Document, page_id: ObjectId) -> Option<&Dictionary> {
    let (direct, ids) = doc.get_page_resources(page_id).ok()?;
    direct.or_else(|| ids.first().and_then(|id| doc.get_dictionary(*id).ok()))
}

fn decode_pdf_string(bytes: &[u8]) -> String {
    if bytes.starts_with(&[0xFE, 0xFF]) {
        let units: Vec<u16> = bytes[2..]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect();
        String::from_utf16_lossy(&units)
    } else if bytes.starts_with(&[0xEF, 0xBB, 0xBF]) {
        String::from_utf8_lossy(&bytes[3..]).into_owned()
    } else {
        bytes.iter().map(|&b| b as char).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Matrix([f64; 6]);

impl Matrix {
    const IDENTITY: Matrix = Matrix([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);

    fn from_slice(v: &[f64]) -> Option<Matrix> {
        (v.len() == 6).then(|| Matrix([v[0], v[1], v[2], v[3], v[4], v[5]]))
    }

    fn translate(tx: f64, ty: f64) -> Matrix {
        Matrix([1.0, 0.0, 0.0, 1.0, tx, ty])
    }

    /// `self × other` in PDF row-vector convention.
    fn then(&self, other: &Matrix) -> Matrix {
        let [a, b, c, d, e, f] = self.0;
        let [a2, b2, c2, d2, e2, f2] = other.0;
        Matrix([
            a * a2 + b * c2,
            a * b2 + b * d2,
            c * a2 + d * c2,
            c * b2 + d * d2,
            e * a2 + f * c2 + e2,
            e * b2 + f * d2 + f2,
        ])
    }

    fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        let [a, b, c, d, e, f] = self.0;
        (x * a + y * c + e, x * b + y * d + f)
    }
}

struct FontEntry<'a> {
    name: String,
    bold: bool,
    italic: bool,
    mono: bool,
    two_byte: bool,
    widths: Widths,
    encoding: Option<Encoding<'a>>,
}

type FontMap<'a> = HashMap<Vec<u8>, Rc<FontEntry<'a>>>;

fn dict_number(doc: &Document, dict: &Dictionary, key: &[u8]) -> Option<f64> {
    dict.get(key).ok().map(|o| resolve(doc, o)).and_then(number)
}

fn font_descriptor<'a>(doc: &'a Document, font: &'a Dictionary) -> Option<&'a Dictionary> {
    font.get(b"FontDescriptor")
        .ok()
        .map(|o| resolve(doc, o))
        .and_then(|o| o.as_dict().ok())
}

fn load_font<'a>(doc: &'a Document, font: &'a Dictionary) -> FontEntry<'a> {
    let raw_name = font
        .get(b"BaseFont")
        .ok()
        .and_then(|o| o.as_name().ok())
        .map(|n| String::from_utf8_lossy(n).into_owned())
        .unwrap_or_else(|| "Unknown".to_string());
    let name = clean_font_name(&raw_name);
    let is_type0 = font.get(b"Subtype").and_then(Object::as_name).ok() == Some(b"Type0".as_slice());

    let descendant = if is_type0 {
        font.get(b"DescendantFonts")
            .ok()
            .map(|o| resolve(doc, o))
            .and_then(|o| o.as_array().ok())
            .and_then(|a| a.first())
            .map(|o| resolve(doc, o))
            .and_then(|o| o.as_dict().ok())
    } else {
        None
    };
    let descriptor = font_descriptor(doc, descendant.unwrap_or(font));
    let flags = descriptor.and_then(|d| dict_number(doc, d, b"Flags")).map(|f| f as i64);
    let weight = descriptor.and_then(|d| dict_number(doc, d, b"FontWeight"));
    let (fb, fi, fm) = style_from_flags(flags, weight);
    let (nb, ni, nm) = style_from_name(&name);

    let widths = if let Some(desc) = descendant {
        let default = dict_number(doc, desc, b"DW").unwrap_or(1000.0);
        let mut map = HashMap::new();
        if let Ok(w) = desc.get(b"W").map(|o| resolve(doc, o)).and_then(Object::as_array) {
            let mut i = 0;
            while i < w.len() {
                let Some(first) = number(resolve(doc, &w[i])) else { break };
                match w.get(i + 1).map(|o| resolve(doc, o)) {
                    Some(Object::Array(list)) => {
                        for (k, v) in numbers(list).into_iter().enumerate() {
                            map.insert(first as u32 + k as u32, v);
                        }
                        i += 2;
                    }
                    Some(o) => {
                        let last = number(o).unwrap_or(first);
                        let v = w.get(i + 2).map(|o| resolve(doc, o)).and_then(number).unwrap_or(default);
                        for code in first as u32..=last as u32 {
                            map.insert(code, v);
                        }
                        i += 3;
                    }
                    None => break,
                }
            }
        }
        Widths::Cid { widths: map, default }
    } else {
        let widths = font
            .get(b"Widths")
            .ok()
            .map(|o| resolve(doc, o))
            .and_then(|o| o.as_array().ok())
            .map(|a| a.iter().map(|o| number(resolve(doc, o)).unwrap_or(0.0)).collect())
            .unwrap_or_default();
        Widths::Simple {
            first_char: dict_number(doc, font, b"FirstChar").unwrap_or(0.0) as u32,
            widths,
            missing: descriptor.and_then(|d| dict_number(doc, d, b"MissingWidth")).unwrap_or(0.0),
            base_font: name.clone(),
        }
    };

    FontEntry {
        bold: fb || nb,
        italic: fi || ni,
        mono: fm || nm,
        two_byte: is_type0,
        widths,
        encoding: font.get_font_encoding(doc).ok(),
        name,
    }
}

fn page_fonts<'a>(doc: &'a Document, page_id: ObjectId) -> FontMap<'a> {
    doc.get_page_fonts(page_id)
        .map(|fonts| {
            fonts
                .into_iter()
                .map(|(name, dict)| (name, Rc::new(load_font(doc, dict))))
                .collect()
        })
        .unwrap_or_default()
}

fn resource_fonts<'a>(doc: &'a Document, resources: &'a Dictionary) -> FontMap<'a> {
    let mut out = FontMap::new();
    if let Ok(fonts) = resources.get(b"Font").map(|o| resolve(doc, o)).and_then(Object::as_dict) {
        for (name, value) in fonts.iter() {
            if let Ok(dict) = resolve(doc, value).as_dict() {
                out.insert(name.clone(), Rc::new(load_font(doc, dict)));
            }
        }
    }
    out
}

#[derive(Clone)]
struct GraphicsState<'a> {
    ctm: Matrix,
    font: Option<Rc<FontEntry<'a>>>,
    font_size: f64,
    char_spacing: f64,
    word_spacing: f64,
    h_scale: f64,
    leading: f64,
    rise: f64,
    line_width: f64,
}

impl Default for GraphicsState<'_> {
    fn default() -> Self {
        Self {
            ctm: Matrix::IDENTITY,
            font: None,
            font_size: 0.0,
            char_spacing: 0.0,
            word_spacing: 0.0,
            h_scale: 1.0,
            leading: 0.0,
            rise: 0.0,
            line_width: 1.0,
        }
    }
}

/// A glyph run accumulating into a span.
struct Run {
    font_name: String,
    bold: bool,
    italic: bool,
    mono: bool,
    size: f64,
    baseline: f64,
    rotated: bool,
    text: String,
    bbox: Option<Rect>,
    last_x1: f64,
    anchor: Option<usize>,
}

struct Glyph<'s> {
    text: &'s str,
    bbox: Rect,
    x0: f64,
    x1: f64,
    baseline: f64,
    size: f64,
    rotated: bool,
}

struct PageExtractor<'a> {
    doc: &'a Document,
    page: usize,
    media: Rect,
    state: GraphicsState<'a>,
    stack: Vec<GraphicsState<'a>>,
    text_matrix: Matrix,
    line_matrix: Matrix,
    run: Option<Run>,
    /// Link annotation areas; runs break where link membership changes.
    link_rects: Vec<Rect>,
    spans: Vec<Span>,
    segments: Vec<DrawSegment>,
    path: Vec<(Point, Point)>,
    path_rects: Vec<Rect>,
    subpath_start: Option<Point>,
    current_point: Option<Point>,
}

impl<'a> PageExtractor<'a> {
    fn new(doc: &'a Document, page: usize, media: Rect) -> Self {
        Self {
            doc,
            page,
            media,
            state: GraphicsState::default(),
            stack: Vec::new(),
            text_matrix: Matrix::IDENTITY,
            line_matrix: Matrix::IDENTITY,
            run: None,
            link_rects: Vec::new(),
            spans: Vec::new(),
            segments: Vec::new(),
            path: Vec::new(),
            path_rects: Vec::new(),
            subpath_start: None,
            current_point: None,
        }
    }

    /// User space → top-left page coordinates.
    fn to_page(&self, x: f64, y: f64) -> Point {
        Point::new(x - self.media.x0, self.media.y1 - y)
    }

    fn device_point(&self, x: f64, y: f64) -> Point {
        let (ux, uy) = self.state.ctm.apply(x, y);
        self.to_page(ux, uy)
    }

    fn run(&mut self, content: &[u8], fonts: &FontMap<'a>, resources: Option<&'a Dictionary>, depth: usize) -> Result<()> {
        let content = Content::decode(content)
            .map_err(|e| Error::MalformedPdf(format!("page {}: content stream: {e}", self.page + 1)))?;
        for op in &content.operations {
            let nums = || numbers(&op.operands);
            match op.operator.as_str() {
                "q" => self.stack.push(self.state.clone()),
                "Q" => {
                    if let Some(s) = self.stack.pop() {
                        self.state = s;
                    }
                }
                "cm" => {
                    if let Some(m) = Matrix::from_slice(&nums()) {
                        self.state.ctm = m.then(&self.state.ctm);
                    }
                }
                "w" => {
                    if let Some(w) = nums().first() {
                        self.state.line_width = *w;
                    }
                }
                "BT" => {
                    self.text_matrix = Matrix::IDENTITY;
                    self.line_matrix = Matrix::IDENTITY;
                }
                "ET" => {}
                "Tf" => {
                    if let (Some(name), Some(size)) = (
                        op.operands.first().and_then(|o| o.as_name().ok()),
                        op.operands.get(1).and_then(number),
                    ) {
                        self.state.font = fonts.get(name).cloned();
                        self.state.font_size = size;
                    }
                }
                "Tc" => self.state.char_spacing = nums().first().copied().unwrap_or(0.0),
                "Tw" => self.state.word_spacing = nums().first().copied().unwrap_or(0.0),
                "Tz" => self.state.h_scale = nums().first().copied().unwrap_or(100.0) / 100.0,
                "TL" => self.state.leading = nums().first().copied().unwrap_or(0.0),
                "Ts" => self.state.rise = nums().first().copied().unwrap_or(0.0),
                "Td" | "TD" => {
                    let v = nums();
                    if v.len() == 2 {
                        if op.operator == "TD" {
                            self.state.leading = -v[1];
                        }
                        self.next_line(v[0], v[1]);
                    }
                }
                "Tm" => {
                    if let Some(m) = Matrix::from_slice(&nums()) {
                        self.text_matrix = m;
                        self.line_matrix = m;
                    }
                }
                "T*" => self.next_line(0.0, -self.state.leading),
                "Tj" => {
                    if let Some(Object::String(bytes, _)) = op.operands.first() {
                        self.show(bytes);
                    }
                }
                "'" => {
                    self.next_line(0.0, -self.state.leading);
                    if let Some(Object::String(bytes, _)) = op.operands.first() {
                        self.show(bytes);
                    }
                }
                "\"" => {
                    if op.operands.len() == 3 {
                        self.state.word_spacing = number(&op.operands[0]).unwrap_or(0.0);
                        self.state.char_spacing = number(&op.operands[1]).unwrap_or(0.0);
                        self.next_line(0.0, -self.state.leading);
                        if let Object::String(bytes, _) = &op.operands[2] {
                            self.show(bytes);
                        }
                    }
                }
                "TJ" => {
                    if let Some(Object::Array(items)) = op.operands.first() {
                        for item in items {
                            match item {
                                Object::String(bytes, _) => self.show(bytes),
                                other => {
                                    if let Some(n) = number(other) {
                                        let tx = -n / 1000.0 * self.state.font_size * self.state.h_scale;
                                        self.text_matrix = Matrix::translate(tx, 0.0).then(&self.text_matrix);
                                    }
                                }
                            }
                        }
                    }
                }
                "m" => {
                    let v = nums();
                    if v.len() == 2 {
                        let p = self.device_point(v[0], v[1]);
                        self.subpath_start = Some(p);
                        self.current_point = Some(p);
                    }
                }
                "l" => {
                    let v = nums();
                    if v.len() == 2 {
                        let p = self.device_point(v[0], v[1]);
                        if let Some(c) = self.current_point {
                            self.path.push((c, p));
                        }
                        self.current_point = Some(p);
                    }
                }
                "c" | "v" | "y" => {
                    let v = nums();
                    if v.len() >= 2 {
                        self.current_point = Some(self.device_point(v[v.len() - 2], v[v.len() - 1]));
                    }
                }
                "h" => {
                    if let (Some(c), Some(s)) = (self.current_point, self.subpath_start) {
                        if c != s {
                            self.path.push((c, s));
                        }
                        self.current_point = Some(s);
                    }
                }
                "re" => {
                    let v = nums();
                    if v.len() == 4 {
                        let (x, y, w, h) = (v[0], v[1], v[2], v[3]);
                        let corners = [
                            self.device_point(x, y),
                            self.device_point(x + w, y),
                            self.device_point(x + w, y + h),
                            self.device_point(x, y + h),
                        ];
                        for i in 0..4 {
                            self.path.push((corners[i], corners[(i + 1) % 4]));
                        }
                        self.path_rects.push(Rect::from_corners(corners[0], corners[2]));
                        self.subpath_start = Some(corners[0]);
                        self.current_point = Some(corners[0]);
                    }
                }
                "S" | "s" | "B" | "B*" | "b" | "b*" => {
                    if matches!(op.operator.as_str(), "s" | "b" | "b*") {
                        if let (Some(c), Some(s)) = (self.current_point, self.subpath_start) {
                            if c != s {
                                self.path.push((c, s));
                            }
                        }
                    }
                    self.stroke_path();
                }
                "f" | "F" | "f*" => self.fill_path(),
                "n" => self.clear_path(),
                "Do" => {
                    if let Some(name) = op.operands.first().and_then(|o| o.as_name().ok()) {
                        self.form_xobject(name, fonts, resources, depth)?;
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn form_xobject(
        &mut self,
        name: &[u8],
        fonts: &FontMap<'a>,
        resources: Option<&'a Dictionary>,
        depth: usize,
    ) -> Result<()> {
        if depth >= MAX_FORM_DEPTH {
            return Ok(());
        }
        let doc = self.doc;
        let Some(stream) = resources
            .and_then(|r| r.get(b"XObject").ok())
            .map(|o| resolve(doc, o))
            .and_then(|o| o.as_dict().ok())
            .and_then(|x| x.get(name).ok())
            .map(|o| resolve(doc, o))
            .and_then(|o| o.as_stream().ok())
        else {
            return Ok(());
        };
        if stream.dict.get(b"Subtype").and_then(Object::as_name).ok() != Some(b"Form".as_slice()) {
            return Ok(());
        }
        let data = stream
            .decompressed_content()
            .unwrap_or_else(|_| stream.content.clone());
        let form_resources = stream
            .dict
            .get(b"Resources")
            .ok()
            .map(|o| resolve(doc, o))
            .and_then(|o| o.as_dict().ok());
        let form_fonts;
        let fonts = match form_resources {
            Some(r) if r.has(b"Font") => {
                form_fonts = resource_fonts(doc, r);
                &form_fonts
            }
            _ => fonts,
        };
        let saved = self.state.clone();
        if let Some(m) = stream
            .dict
            .get(b"Matrix")
            .ok()
            .and_then(|o| o.as_array().ok())
            .and_then(|a| Matrix::from_slice(&numbers(a)))
        {
            self.state.ctm = m.then(&self.state.ctm);
        }
        let result = self.run(&data, fonts, form_resources.or(resources), depth + 1);
        self.state = saved;
        result
    }

    fn next_line(&mut self, tx: f64, ty: f64) {
        self.line_matrix = Matrix::translate(tx, ty).then(&self.line_matrix);
        self.text_matrix = self.line_matrix;
    }

    fn clear_path(&mut self) {
        self.path.clear();
        self.path_rects.clear();
        self.subpath_start = None;
        self.current_point = None;
    }

    fn stroke_path(&mut self) {
        let [a, b, c, d, _, _] = self.state.ctm.0;
        let scale = (a * d - b * c).abs().sqrt();
        let width = self.state.line_width * if scale > 0.0 { scale } else { 1.0 };
        for (p0, p1) in std::mem::take(&mut self.path) {
            if (p0.x - p1.x).hypot(p0.y - p1.y) < 0.1 {
                continue;
            }
            self.segments.push(DrawSegment {
                page_index: self.page,
                p0,
                p1,
                stroke_width: width,
            });
        }
        self.clear_path();
    }

    /// Thin filled rectangles are rules drawn as fills; record their centre line.
    fn fill_path(&mut self) {
        for r in std::mem::take(&mut self.path_rects) {
            let (w, h) = (r.width(), r.height());
            if h <= RULE_THICKNESS && w > h {
                let y = (r.y0 + r.y1) / 2.0;
                self.segments.push(DrawSegment {
                    page_index: self.page,
                    p0: Point::new(r.x0, y),
                    p1: Point::new(r.x1, y),
                    stroke_width: h,
                });
            } else if w <= RULE_THICKNESS && h > w {
                let x = (r.x0 + r.x1) / 2.0;
                self.segments.push(DrawSegment {
                    page_index: self.page,
                    p0: Point::new(x, r.y0),
                    p1: Point::new(x, r.y1),
                    stroke_width: w,
                });
            }
        }
        self.clear_path();
    }

    fn show(&mut self, bytes: &[u8]) {
        let Some(font) = self.state.font.clone() else { return };
        let fs = self.state.font_size;
        let th = self.state.h_scale;
        let step = if font.two_byte { 2 } else { 1 };
        for code_bytes in bytes.chunks(step) {
            let code = code_bytes.iter().fold(0u32, |acc, b| acc * 256 + *b as u32);
            let text = match &font.encoding {
                Some(enc) => enc.bytes_to_string(code_bytes).unwrap_or_default(),
                None => code_bytes.iter().map(|&b| b as char).collect(),
            };
            let w0 = font.widths.width(code) / 1000.0;
            let is_space = step == 1 && code == 32;
            let rendering = Matrix([fs * th, 0.0, 0.0, fs, 0.0, self.state.rise])
                .then(&self.text_matrix)
                .then(&self.state.ctm);
            self.glyph(&font, &rendering, w0, &text);
            let tx = (w0 * fs + self.state.char_spacing + if is_space { self.state.word_spacing } else { 0.0 }) * th;
            self.text_matrix = Matrix::translate(tx, 0.0).then(&self.text_matrix);
        }
        if self.run.as_ref().is_some_and(|r| r.rotated) {
            self.flush();
        }
    }

    fn glyph(&mut self, font: &FontEntry<'a>, trm: &Matrix, w0: f64, text: &str) {
        let [a, b, c, d, _, _] = trm.0;
        let size = c.hypot(d);
        if size <= 0.0 {
            return;
        }
        let rotated = b.abs() > 1e-3 * a.abs().max(1e-9) || c.abs() > 1e-3 * d.abs().max(1e-9) || a <= 0.0 || d <= 0.0;
        let corners = [
            trm.apply(0.0, -DESCENT_RATIO),
            trm.apply(w0, -DESCENT_RATIO),
            trm.apply(w0, ASCENT_RATIO),
            trm.apply(0.0, ASCENT_RATIO),
        ];
        let pts: Vec<Point> = corners.iter().map(|(x, y)| self.to_page(*x, *y)).collect();
        let bbox = pts[1..].iter().fold(Rect::from_corners(pts[0], pts[0]), |r, p| {
            r.union(&Rect::from_corners(*p, *p))
        });
        let (ox, oy) = trm.apply(0.0, 0.0);
        let origin = self.to_page(ox, oy);
        let g = Glyph {
            text,
            bbox,
            x0: origin.x,
            x1: self.to_page(trm.apply(w0, 0.0).0, 0.0).x,
            baseline: origin.y,
            size,
            rotated,
        };
        self.push_glyph(font, g);
    }

    fn push_glyph(&mut self, font: &FontEntry<'a>, g: Glyph<'_>) {
        let blank = g.text.chars().all(char::is_whitespace);
        let anchor = self.link_rects.iter().position(|r| r.contains(g.bbox.center()));
        if let Some(run) = &mut self.run {
            let same_style = run.font_name == font.name
                && run.bold == font.bold
                && run.italic == font.italic
                && run.mono == font.mono
                && (run.size - g.size).abs() < 0.01
                && run.rotated == g.rotated
                && (blank || run.anchor == anchor);
            let same_baseline = g.rotated || (run.baseline - g.baseline).abs() <= 0.01 * g.size;
            let gap = g.x0 - run.last_x1;
            let contiguous = g.rotated || (gap > -SPAN_GAP * g.size && gap <= SPAN_GAP * g.size);
            if same_style && same_baseline && contiguous {
                if !g.rotated && gap > WORD_GAP * g.size && !run.text.ends_with(' ') && !blank {
                    run.text.push(' ');
                }
                run.text.push_str(g.text);
                if !blank {
                    run.bbox = Some(run.bbox.map_or(g.bbox, |b| b.union(&g.bbox)));
                }
                run.last_x1 = g.x1;
                return;
            }
            self.flush();
        }
        if blank {
            return;
        }
        self.run = Some(Run {
            font_name: font.name.clone(),
            bold: font.bold,
            italic: font.italic,
            mono: font.mono,
            size: g.size,
            baseline: g.baseline,
            rotated: g.rotated,
            text: g.text.to_string(),
            bbox: Some(g.bbox),
            last_x1: g.x1,
            anchor,
        });
    }

    fn flush(&mut self) {
        let Some(run) = self.run.take() else { return };
        let text: String = run.text.split_whitespace().collect::<Vec<_>>().join(" ");
        let (Some(bbox), false) = (run.bbox, text.is_empty()) else { return };
        self.spans.push(Span {
            page_index: self.page,
            bbox,
            text,
            font_size: run.size,
            font_name: run.font_name,
            bold: run.bold,
            italic: run.italic,
            monospaced: run.mono,
            rotated: run.rotated,
            link: None,
        });
    }
}

fn page_links(doc: &Document, page_id: ObjectId, page: usize, media: &Rect) -> Vec<LinkBox> {
    let Ok(page_dict) = doc.get_dictionary(page_id) else { return Vec::new() };
    let Ok(annots) = page_dict.get(b"Annots").map(|o| resolve(doc, o)).and_then(Object::as_array) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for annot in annots {
        let Ok(dict) = resolve(doc, annot).as_dict() else { continue };
        if dict.get(b"Subtype").and_then(Object::as_name).ok() != Some(b"Link".as_slice()) {
            continue;
        }
        let Some(uri) = dict
            .get(b"A")
            .ok()
            .map(|o| resolve(doc, o))
            .and_then(|o| o.as_dict().ok())
            .filter(|a| a.get(b"S").and_then(Object::as_name).ok() == Some(b"URI".as_slice()))
            .and_then(|a| a.get(b"URI").ok())
            .map(|o| resolve(doc, o))
            .and_then(|o| o.as_str().ok())
            .map(decode_pdf_string)
            .filter(|u| !u.is_empty())
        else {
            continue;
        };
        let Some(rect) = dict
            .get(b"Rect")
            .ok()
            .map(|o| resolve(doc, o))
            .and_then(|o| o.as_array().ok())
            .map(|a| numbers(a))
            .filter(|v| v.len() == 4)
        else {
            continue;
        };
        let p0 = Point::new(rect[0] - media.x0, media.y1 - rect[1]);
        let p1 = Point::new(rect[2] - media.x0, media.y1 - rect[3]);
        out.push(LinkBox {
            page_index: page,
            bbox: Rect::from_corners(p0, p1),
            uri,
        });
    }
    out
}

fn outline(doc: &Document, page_index: &HashMap<ObjectId, usize>) -> Option<Vec<MetadataTocEntry>> {
    let catalog = doc.catalog().ok()?;
    let outlines = catalog.get(b"Outlines").ok().map(|o| resolve(doc, o))?.as_dict().ok()?;
    let first = outlines.get(b"First").and_then(Object::as_reference).ok()?;
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    walk_outline(doc, first, 1, page_index, &mut seen, &mut entries);
    (!entries.is_empty()).then_some(entries)
}

fn walk_outline(
    doc: &Document,
    first: ObjectId,
    level: u32,
    page_index: &HashMap<ObjectId, usize>,
    seen: &mut HashSet<ObjectId>,
    out: &mut Vec<MetadataTocEntry>,
) {
    if level > 64 {
        return;
    }
    let mut current = Some(first);
    while let Some(id) = current {
        if !seen.insert(id) {
            break;
        }
        let Ok(item) = doc.get_dictionary(id) else { break };
        let title = item
            .get(b"Title")
            .ok()
            .map(|o| resolve(doc, o))
            .and_then(|o| o.as_str().ok())
            .map(decode_pdf_string)
            .unwrap_or_default();
        let dest = item.get(b"Dest").ok().or_else(|| {
            item.get(b"A")
                .ok()
                .map(|o| resolve(doc, o))
                .and_then(|a| a.as_dict().ok())
                .and_then(|a| a.get(b"D").ok())
        });
        let page = dest
            .map(|d| resolve(doc, d))
            .and_then(|d| d.as_array().ok())
            .and_then(|a| a.first())
            .and_then(|o| o.as_reference().ok())
            .and_then(|pid| page_index.get(&pid).copied());
        let title = title.trim().to_string();
        if let (false, Some(page)) = (title.is_empty(), page) {
            out.push(MetadataTocEntry { title, level, page_index: page });
        }
        if let Ok(child) = item.get(b"First").and_then(Object::as_reference) {
            walk_outline(doc, child, level + 1, page_index, seen, out);
        }
        current = item.get(b"Next").and_then(Object::as_reference).ok();
    }
}
