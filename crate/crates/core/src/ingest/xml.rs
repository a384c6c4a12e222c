//! Streaming reader for the MediaWiki XML export subset.

use std::io::{BufReader, Read};

use quick_xml::events::Event;
use quick_xml::Reader;

use super::{RawPage, SetBuilder};
use crate::error::{Error, Result};

const BUF_SIZE: usize = 64 * 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Title,
    Namespace,
    Id,
    Text,
}

fn malformed(offset: u64, message: impl Into<String>) -> Error {
    Error::Malformed {
        offset,
        message: message.into(),
    }
}

pub(super) fn read_pages<R: Read>(stream: R, builder: &mut SetBuilder<'_>) -> Result<()> {
    let mut reader = Reader::from_reader(BufReader::with_capacity(BUF_SIZE, stream));
    reader.config_mut().trim_text(false);

    let mut buf = Vec::new();
    let mut depth = 0usize;
    // depth at which the current <page> was opened
    let mut page_depth: Option<usize> = None;
    let mut page_start = 0u64;
    let mut page = RawPage::default();
    let mut field: Option<Field> = None;
    let mut scratch = String::new();

    loop {
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|e| malformed(reader.error_position(), e.to_string()))?;
        match event {
            Event::Start(e) => {
                depth += 1;
                let name = e.local_name();
                match (page_depth, name.as_ref()) {
                    (None, b"page") => {
                        page_depth = Some(depth);
                        page_start = reader.buffer_position() - (e.len() as u64 + 2);
                        page = RawPage::default();
                    }
                    (Some(pd), tag) => {
                        field = match tag {
                            b"title" if depth == pd + 1 => Some(Field::Title),
                            b"ns" if depth == pd + 1 => Some(Field::Namespace),
                            b"id" if depth == pd + 1 => Some(Field::Id),
                            b"text" => Some(Field::Text),
                            b"redirect" => {
                                read_redirect(&e, &mut page, reader.buffer_position())?;
                                None
                            }
                            _ => None,
                        };
                        scratch.clear();
                    }
                    _ => {}
                }
            }
            Event::Empty(e) => {
                if page_depth.is_some() && e.local_name().as_ref() == b"redirect" {
                    read_redirect(&e, &mut page, reader.buffer_position())?;
                }
            }
            Event::Text(t) => {
                if field.is_some() {
                    let s = t
                        .unescape()
                        .map_err(|e| malformed(reader.buffer_position(), e.to_string()))?;
                    scratch.push_str(&s);
                }
            }
            Event::CData(t) => {
                if field.is_some() {
                    let s = std::str::from_utf8(t.as_ref())
                        .map_err(|e| malformed(reader.buffer_position(), e.to_string()))?;
                    scratch.push_str(s);
                }
            }
            Event::End(e) => {
                let offset = reader.buffer_position();
                if let Some(f) = field.take() {
                    let value = std::mem::take(&mut scratch);
                    match f {
                        Field::Title => page.title = value,
                        Field::Namespace => {
                            page.namespace = Some(
                                value
                                    .trim()
                                    .parse()
                                    .map_err(|_| malformed(offset, format!("bad namespace {value:?}")))?,
                            )
                        }
                        Field::Id => {
                            page.id = Some(
                                value
                                    .trim()
                                    .parse()
                                    .map_err(|_| malformed(offset, format!("bad page id {value:?}")))?,
                            )
                        }
                        Field::Text => page.text = value,
                    }
                }
                if page_depth == Some(depth) && e.local_name().as_ref() == b"page" {
                    page_depth = None;
                    builder.push(std::mem::take(&mut page), page_start)?;
                }
                depth = depth.saturating_sub(1);
            }
            Event::Eof => {
                let offset = reader.buffer_position();
                if page_depth.is_some() || depth > 0 {
                    return Err(malformed(offset, "unexpected end of input inside an open element"));
                }
                builder.set_bytes_read(offset);
                return Ok(());
            }
            _ => {}
        }
        buf.clear();
    }
}

fn read_redirect(e: &quick_xml::events::BytesStart<'_>, page: &mut RawPage, offset: u64) -> Result<()> {
    let attr = e
        .try_get_attribute("title")
        .map_err(|err| malformed(offset, err.to_string()))?;
    if let Some(a) = attr {
        let v = a.unescape_value().map_err(|err| malformed(offset, err.to_string()))?;
        page.redirect_target = Some(v.into_owned());
    }
    Ok(())
}
