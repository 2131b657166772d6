//! Praat `Formant 2` text files, long ("labelled") and short variants.
//!
//! Both variants carry the same sequence of numbers; the long one adds
//! `name = ` labels and `[i]` indices. The tokenizer keeps quoted strings and
//! numbers and drops everything else, so one grammar reads both.

use crate::error::{Error, Result};
use crate::num::Real;

use super::track::{FormantTrack, Frame};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Str(String),
    Num(f64),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    let mut word = String::new();

    fn flush(word: &mut String, line: usize, out: &mut Vec<(usize, Token)>) {
        if !word.is_empty() {
            if let Ok(v) = word.parse::<f64>() {
                out.push((line, Token::Num(v)));
            }
            word.clear();
        }
    }

    while let Some(ch) = chars.next() {
        match ch {
            '"' => {
                flush(&mut word, line, &mut out);
                let start = line;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') if chars.peek() == Some(&'"') => {
                            chars.next();
                            s.push('"');
                        }
                        Some('"') => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                        None => {
                            return Err(Error::Parse { line: start, msg: "unterminated string".into() })
                        }
                    }
                }
                out.push((start, Token::Str(s)));
            }
            '[' => {
                flush(&mut word, line, &mut out);
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                    }
                    if c == ']' {
                        break;
                    }
                }
            }
            '!' => {
                flush(&mut word, line, &mut out);
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {
                flush(&mut word, line, &mut out);
                if c == '\n' {
                    line += 1;
                }
            }
            c => word.push(c),
        }
    }
    flush(&mut word, line, &mut out);
    Ok(out)
}

struct Cursor {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Cursor {
    fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map_or(1, |(l, _)| *l)
    }

    fn string(&mut self, what: &str) -> Result<String> {
        match self.tokens.get(self.pos) {
            Some((_, Token::Str(s))) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(Error::Parse { line: self.line(), msg: format!("expected {what}") }),
        }
    }

    fn number(&mut self, what: &str) -> Result<f64> {
        match self.tokens.get(self.pos) {
            Some((_, Token::Num(v))) => {
                self.pos += 1;
                Ok(*v)
            }
            Some((line, Token::Str(s))) => Err(Error::Parse {
                line: *line,
                msg: format!("expected {what}, found string \"{s}\""),
            }),
            None => Err(Error::Parse { line: self.line(), msg: format!("unexpected end of file, expected {what}") }),
        }
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let line = self.line();
        let v = self.number(what)?;
        if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
            return Err(Error::Parse { line, msg: format!("{what} must be a non-negative integer, got {v}") });
        }
        Ok(v as usize)
    }
}

/// Parses a Praat Formant object saved as text. Frame `i` is placed at
/// `(x1 + i·dx)·1000` ms; the first three formants become F1..F3.
pub fn parse_praat_formant<T: Real>(text: &str) -> Result<FormantTrack<T>> {
    let mut cur = Cursor { tokens: tokenize(text)?, pos: 0 };

    let file_type = cur.string("file type \"ooTextFile\"")?;
    if file_type != "ooTextFile" && file_type != "ooTextFile short" {
        return Err(Error::Parse { line: 1, msg: format!("not a Praat text file (file type \"{file_type}\")") });
    }
    let class = cur.string("object class")?;
    if class != "Formant 2" {
        return Err(Error::Parse {
            line: cur.tokens[cur.pos - 1].0,
            msg: format!("expected object class \"Formant 2\", found \"{class}\""),
        });
    }

    let _xmin = cur.number("xmin")?;
    let _xmax = cur.number("xmax")?;
    let nx = cur.count("nx")?;
    let dx_line = cur.line();
    let dx = cur.number("dx")?;
    if !(dx > 0.0) {
        return Err(Error::Parse { line: dx_line, msg: format!("dx must be positive, got {dx}") });
    }
    let x1 = cur.number("x1")?;
    let max_formants = cur.count("maxnFormants")?;

    let mut frames = Vec::with_capacity(nx);
    for i in 0..nx {
        let _intensity = cur.number("intensity").map_err(|e| frame_count_hint(e, nx, i))?;
        let n_line = cur.line();
        let n = cur.count("numberOfFormants")?;
        if n > max_formants {
            return Err(Error::Parse {
                line: n_line,
                msg: format!("frame {} has {n} formants, more than maxnFormants = {max_formants}", i + 1),
            });
        }
        let mut frame = Frame::new(T::lit((x1 + i as f64 * dx) * 1000.0));
        for k in 0..n {
            let f = cur.number("formant frequency")?;
            let _bw = cur.number("formant bandwidth")?;
            let value = (f.is_finite() && f > 0.0).then(|| T::lit(f));
            match k {
                0 => frame.f1_hz = value,
                1 => frame.f2_hz = value,
                2 => frame.f3_hz = value,
                _ => {}
            }
        }
        frames.push(frame);
    }
    if cur.pos != cur.tokens.len() {
        return Err(Error::Parse {
            line: cur.line(),
            msg: format!("nx = {nx} but the file contains data beyond frame {nx}"),
        });
    }
    FormantTrack::new(frames, "").map_err(|e| Error::Parse { line: 0, msg: e.to_string() })
}

fn frame_count_hint(e: Error, nx: usize, i: usize) -> Error {
    match e {
        Error::Parse { line, msg } if msg.starts_with("unexpected end") => Error::Parse {
            line,
            msg: format!("nx = {nx} but the file ends after {i} frames"),
        },
        other => other,
    }
}
