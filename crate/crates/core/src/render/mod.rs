//! Image and text observations. Both are pure functions of the state and the
//! viewing agent; each game module also ships a parser that reads its own
//! text layout back into the observable part of the state.

pub mod breakthrough;
pub mod canvas;
pub mod grid;
pub mod hanabi;
pub mod kuhn;
pub mod overcooked;
pub mod pong;
pub mod tictactoe;

use thiserror::Error;

/// Side length of the square frames used by every game except Pong.
pub const FRAME_SIZE: u32 = 512;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse observation text: {0}")]
pub struct ParseError(pub String);

pub(crate) fn perr<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

/// The value after `key: ` on the first line that starts with `key:`.
pub(crate) fn field<'a>(text: &'a str, key: &str) -> Result<&'a str, ParseError> {
    let prefix = format!("{key}:");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .map(str::trim)
        .ok_or_else(|| ParseError(format!("missing `{key}` line")))
}

pub(crate) fn num<T: std::str::FromStr>(s: &str) -> Result<T, ParseError> {
    s.trim().parse().map_err(|_| ParseError(format!("bad number `{s}`")))
}

/// Parses `(x, y)`.
pub(crate) fn pair(s: &str) -> Result<(i32, i32), ParseError> {
    let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')'));
    let inner = inner.ok_or_else(|| ParseError(format!("bad coordinate `{s}`")))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| ParseError(format!("bad coordinate `{s}`")))?;
    Ok((num(a)?, num(b)?))
}
