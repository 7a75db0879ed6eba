use crate::layout::Block;
use crate::pdf::Span;

#[derive(Clone, PartialEq)]
struct Style {
    bold: bool,
    italic: bool,
    link: Option<String>,
}

impl Style {
    fn of(s: &Span) -> Self {
        Self { bold: s.bold, italic: s.italic, link: s.link.clone() }
    }

    fn wrap(&self, text: &str) -> String {
        let marker = match (self.bold, self.italic) {
            (true, true) => "***",
            (true, false) => "**",
            (false, true) => "*",
            (false, false) => "",
        };
        let inner = format!("{marker}{text}{marker}");
        match &self.link {
            Some(uri) => format!("[{inner}]({uri})"),
            None => inner,
        }
    }
}

fn ends_with_split_word(text: &str) -> bool {
    let mut rev = text.chars().rev();
    rev.next() == Some('-') && rev.next().is_some_and(char::is_alphabetic)
}

/// One paragraph: lines joined by spaces, words broken across lines with a
/// hyphen rejoined when the next line starts lowercase, styled runs wrapped
/// in emphasis markers, linked runs wrapped as links.
pub(super) fn render_block(block: &Block) -> String {
    // (text, style, separator before this piece)
    let mut pieces: Vec<(String, Style, &'static str)> = Vec::new();
    for line in &block.lines {
        let mut prev: Option<&Span> = None;
        for s in &line.spans {
            let text = s.text.trim();
            if text.is_empty() {
                continue;
            }
            let sep = match prev {
                Some(p) => {
                    let gap = s.bbox.x0 - p.bbox.x1;
                    if gap > 0.1 * p.font_size.min(s.font_size) || s.rotated || p.rotated {
                        " "
                    } else {
                        ""
                    }
                }
                None if pieces.is_empty() => "",
                None => {
                    let (last, _, _) = pieces.last_mut().unwrap();
                    if ends_with_split_word(last) && text.chars().next().is_some_and(char::is_lowercase) {
                        last.pop();
                        ""
                    } else {
                        " "
                    }
                }
            };
            pieces.push((text.to_string(), Style::of(s), sep));
            prev = Some(s);
        }
    }
    let mut out = String::new();
    let mut i = 0;
    while i < pieces.len() {
        let style = pieces[i].1.clone();
        out.push_str(pieces[i].2);
        let mut run = pieces[i].0.clone();
        let mut j = i + 1;
        while j < pieces.len() && pieces[j].1 == style {
            run.push_str(pieces[j].2);
            run.push_str(&pieces[j].0);
            j += 1;
        }
        out.push_str(&style.wrap(&run));
        i = j;
    }
    out
}
