//! Plain-text configuration files: one nonnegative height per line.

use std::io::Read;
use std::path::Path;

use crate::chip_core::ChipConfig;
use crate::error::{Error, Result};

/// Blank lines and `#` comments are skipped; `n` is the number of heights.
pub fn parse_heights(text: &str) -> Result<ChipConfig> {
    let mut heights = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let h = line
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("line {}: {line:?} is not a height", i + 1)))?;
        heights.push(h);
    }
    ChipConfig::new(heights)
}

pub fn read_heights<R: Read>(mut r: R) -> Result<ChipConfig> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    parse_heights(&text)
}

pub fn read_heights_file(path: &Path) -> Result<ChipConfig> {
    read_heights(std::fs::File::open(path)?)
}

pub fn format_heights(c: &ChipConfig) -> String {
    c.heights().iter().map(|h| format!("{h}\n")).collect()
}
