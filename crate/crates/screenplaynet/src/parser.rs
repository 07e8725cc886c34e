//! Screenplay text parsing: scene chunking, heading grammar, block
//! classification and conversation segmentation.
//!
//! A script is cut into scenes at `INT`/`EXT` heading lines. Scene bodies are
//! classified line by line into description paragraphs and dialogue groups
//! (an uppercase cue followed by indented dialogue). Classification is
//! indentation driven and auto-calibrated per script: the description margin
//! is the modal indentation of non-blank body lines, and cue lines must sit
//! at least [`CUE_EXTRA_INDENT`] columns deeper.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Extra indentation (columns past the description margin) required for a
/// speaker cue line.
pub const CUE_EXTRA_INDENT: usize = 8;

#[derive(Debug, Error)]
pub enum ParseError {
    /// No scene heading was found anywhere in the input; the text is not a
    /// script in the supported format.
    #[error("no scene heading found in input")]
    EmptyScript,
}

/// Whether a scene plays inside, outside, both, or could not be determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interiority {
    Interior,
    Exterior,
    Both,
    Unknown,
}

/// Parsed scene heading: interiority marker, location text and optional
/// time-of-day suffix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SettingHeader {
    pub interiority: Interiority,
    pub location_raw: String,
    pub time_of_day: Option<String>,
}

impl SettingHeader {
    /// Render the header back into a heading line. `parse_heading` is
    /// idempotent on this rendering.
    pub fn to_heading_line(&self) -> String {
        let marker = match self.interiority {
            Interiority::Interior => "INT.",
            Interiority::Exterior => "EXT.",
            Interiority::Both => "INT./EXT.",
            Interiority::Unknown => return self.location_raw.clone(),
        };
        match &self.time_of_day {
            Some(t) => format!("{} {} - {}", marker, self.location_raw, t),
            None => format!("{} {}", marker, self.location_raw),
        }
    }
}

/// An uninterrupted dialogue block spoken by one character.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    /// Speaker name as printed on the cue line, with production extensions
    /// such as `(V.O.)` or `(CONT'D)` stripped.
    pub speaker_raw: String,
    /// Dialogue text with parenthetical lines removed. Empty only when the
    /// block consisted purely of parentheticals.
    pub text: String,
    pub scene_index: usize,
    pub block_index: usize,
}

/// A block of scene description (action) text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptionBlock {
    pub text: String,
    pub scene_index: usize,
    pub block_index: usize,
}

/// One classified block of a scene body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SceneBlock {
    Description(DescriptionBlock),
    Utterance(Utterance),
}

impl SceneBlock {
    pub fn block_index(&self) -> usize {
        match self {
            SceneBlock::Description(d) => d.block_index,
            SceneBlock::Utterance(u) => u.block_index,
        }
    }
}

/// One scene: the temporal unit of a script.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scene {
    pub index: usize,
    pub header: SettingHeader,
    pub blocks: Vec<SceneBlock>,
}

impl Scene {
    pub fn utterances(&self) -> impl Iterator<Item = &Utterance> {
        self.blocks.iter().filter_map(|b| match b {
            SceneBlock::Utterance(u) => Some(u),
            SceneBlock::Description(_) => None,
        })
    }

    pub fn descriptions(&self) -> impl Iterator<Item = &DescriptionBlock> {
        self.blocks.iter().filter_map(|b| match b {
            SceneBlock::Description(d) => Some(d),
            SceneBlock::Utterance(_) => None,
        })
    }
}

/// A maximal run of consecutive utterances within one scene.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conversation {
    pub scene_index: usize,
    pub utterances: Vec<Utterance>,
    pub participants: BTreeSet<String>,
}

/// Raw scene chunk produced by [`chunk_scenes`]: the heading line plus the
/// unclassified body lines that follow it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneChunk {
    pub heading: String,
    pub body: Vec<String>,
}

/// Per-script layout calibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScriptLayout {
    /// Modal indentation of non-blank body lines; the description margin.
    pub description_margin: usize,
}

/// Classification assigned to each body line by [`tag_lines`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineTag {
    Blank,
    Transition,
    /// Speaker cue opening a dialogue group; carries the cleaned speaker name.
    Cue(String),
    Parenthetical,
    Dialogue,
    Description,
}

fn indent_of(line: &str) -> usize {
    let mut cols = 0;
    for c in line.chars() {
        match c {
            ' ' => cols += 1,
            '\t' => cols += 4,
            _ => break,
        }
    }
    cols
}

/// True when the text contains at least one letter and no lowercase letters.
fn is_all_uppercase(text: &str) -> bool {
    let mut saw_letter = false;
    for c in text.chars() {
        if c.is_alphabetic() {
            saw_letter = true;
            if c.is_lowercase() {
                return false;
            }
        }
    }
    saw_letter
}

/// Strip trailing parenthesized production extensions ("(V.O.)", "(O.S.)",
/// "(CONT'D)", ...) from a cue line.
fn clean_cue(cue: &str) -> String {
    let mut s = cue.trim().to_string();
    while s.ends_with(')') {
        match s.rfind('(') {
            Some(open) => {
                s.truncate(open);
                s = s.trim_end().to_string();
            }
            None => break,
        }
    }
    s
}

fn is_transition(trimmed: &str) -> bool {
    if trimmed.ends_with("TO:") {
        return true;
    }
    trimmed.ends_with(':') && is_all_uppercase(trimmed)
}

/// Try to match a heading marker at the start of `text` (already trimmed and
/// past any scene number). Returns the interiority and the rest of the line.
fn match_marker(text: &str) -> Option<(Interiority, &str)> {
    // Longest alternatives first so "INT./EXT." is not cut short at "INT.".
    const MARKERS: &[(&str, Interiority)] = &[
        ("INT./EXT.", Interiority::Both),
        ("INT/EXT.", Interiority::Both),
        ("INT./EXT", Interiority::Both),
        ("INT/EXT", Interiority::Both),
        ("I/E.", Interiority::Both),
        ("I/E", Interiority::Both),
        ("INT.", Interiority::Interior),
        ("INT", Interiority::Interior),
        ("EXT.", Interiority::Exterior),
        ("EXT", Interiority::Exterior),
    ];
    for (marker, kind) in MARKERS {
        // Markers are ASCII; get() rejects non-boundary prefixes outright.
        let Some(prefix) = text.get(..marker.len()) else {
            continue;
        };
        if prefix.eq_ignore_ascii_case(marker) {
            let rest = &text[marker.len()..];
            // The marker must end at a word boundary ("INTERIOR" is not a
            // heading marker).
            if rest.is_empty() || !rest.chars().next().unwrap().is_alphanumeric() {
                return Some((*kind, rest));
            }
        }
    }
    None
}

fn strip_scene_number(trimmed: &str) -> &str {
    let mut chars = trimmed.char_indices().peekable();
    let mut digits = 0;
    let mut end = 0;
    while let Some((i, c)) = chars.peek().copied() {
        if c.is_ascii_digit() {
            digits += 1;
            end = i + c.len_utf8();
            chars.next();
        } else {
            break;
        }
    }
    if digits == 0 {
        return trimmed;
    }
    // Optional revision letter and period after the number, then whitespace.
    if let Some((i, c)) = chars.peek().copied() {
        if c.is_ascii_uppercase() {
            end = i + c.len_utf8();
            chars.next();
        }
    }
    if let Some((i, c)) = chars.peek().copied() {
        if c == '.' {
            end = i + c.len_utf8();
            chars.next();
        }
    }
    match chars.peek() {
        Some((_, c)) if c.is_whitespace() => trimmed[end..].trim_start(),
        _ => trimmed,
    }
}

/// True when the line opens a new scene: optional scene number, then an
/// INT/EXT marker, then non-empty location text.
pub fn is_heading_line(line: &str) -> bool {
    let trimmed = line.trim();
    let after_number = strip_scene_number(trimmed);
    match match_marker(after_number) {
        Some((_, rest)) => !rest.trim().is_empty(),
        None => false,
    }
}

/// Parse a heading line into a [`SettingHeader`]. Total: lines without a
/// marker yield `Unknown` interiority with the whole line as the location.
pub fn parse_heading(line: &str) -> SettingHeader {
    let trimmed = line.trim();
    let after_number = strip_scene_number(trimmed);
    let (interiority, rest) = match match_marker(after_number) {
        Some((kind, rest)) if !rest.trim().is_empty() => (kind, rest.trim()),
        _ => {
            return SettingHeader {
                interiority: Interiority::Unknown,
                location_raw: trimmed.to_string(),
                time_of_day: None,
            };
        }
    };
    // Time of day splits on the last " - " separator.
    let (location, time) = match rest.rfind(" - ") {
        Some(pos) => {
            let loc = rest[..pos].trim();
            let t = rest[pos + 3..].trim();
            if loc.is_empty() || t.is_empty() {
                (rest, None)
            } else {
                (loc, Some(t.to_string()))
            }
        }
        None => (rest, None),
    };
    SettingHeader {
        interiority,
        location_raw: location.to_string(),
        time_of_day: time,
    }
}

/// Split the raw script into scene chunks. Lines before the first heading
/// (title page material) are discarded.
pub fn chunk_scenes(raw_text: &str) -> Result<Vec<SceneChunk>, ParseError> {
    let normalized = raw_text.replace("\r\n", "\n").replace('\r', "\n");
    let mut chunks: Vec<SceneChunk> = Vec::new();
    for line in normalized.split('\n') {
        if is_heading_line(line) {
            chunks.push(SceneChunk {
                heading: line.to_string(),
                body: Vec::new(),
            });
        } else if let Some(chunk) = chunks.last_mut() {
            chunk.body.push(line.to_string());
        }
    }
    if chunks.is_empty() {
        return Err(ParseError::EmptyScript);
    }
    Ok(chunks)
}

/// Calibrate the description margin: the modal indentation of non-blank body
/// lines across the whole script. Ties break toward the smaller indent.
pub fn calibrate_layout(chunks: &[SceneChunk]) -> ScriptLayout {
    let mut counts: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for chunk in chunks {
        for line in &chunk.body {
            if !line.trim().is_empty() {
                *counts.entry(indent_of(line)).or_insert(0) += 1;
            }
        }
    }
    let description_margin = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(indent, _)| *indent)
        .unwrap_or(0);
    ScriptLayout { description_margin }
}

/// Tag every body line of a chunk. This is the single classification pass
/// that [`parse_scene_body`] builds blocks from; the golden-fixture tests
/// compare these tags against hand labels.
pub fn tag_lines(chunk: &SceneChunk, layout: &ScriptLayout) -> Vec<LineTag> {
    let margin = layout.description_margin;
    let cue_indent = margin + CUE_EXTRA_INDENT;
    let mut tags: Vec<LineTag> = Vec::with_capacity(chunk.body.len());
    let mut in_dialogue = false;

    for line in &chunk.body {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            tags.push(LineTag::Blank);
            in_dialogue = false;
            continue;
        }
        if is_transition(trimmed) {
            tags.push(LineTag::Transition);
            in_dialogue = false;
            continue;
        }
        let indent = indent_of(line);
        let is_paren = trimmed.starts_with('(') && trimmed.ends_with(')');
        if indent >= cue_indent && !is_paren {
            let speaker = clean_cue(trimmed);
            if !speaker.is_empty() && is_all_uppercase(&speaker) {
                tags.push(LineTag::Cue(speaker));
                in_dialogue = true;
                continue;
            }
        }
        if in_dialogue {
            if indent <= margin {
                // Margin reset ends the dialogue group.
                in_dialogue = false;
                tags.push(LineTag::Description);
            } else if is_paren {
                tags.push(LineTag::Parenthetical);
            } else {
                tags.push(LineTag::Dialogue);
            }
        } else {
            tags.push(LineTag::Description);
        }
    }

    // A cue followed by no dialogue or parenthetical line is not a dialogue
    // group; demote it to description (lossy-safe).
    for i in 0..tags.len() {
        if matches!(tags[i], LineTag::Cue(_)) {
            let has_content = matches!(
                tags.get(i + 1),
                Some(LineTag::Dialogue) | Some(LineTag::Parenthetical)
            );
            if !has_content {
                tags[i] = LineTag::Description;
            }
        }
    }
    tags
}

/// Build the ordered block list of one scene from its tagged lines.
pub fn parse_scene_body(
    chunk: &SceneChunk,
    scene_index: usize,
    layout: &ScriptLayout,
) -> Vec<SceneBlock> {
    let tags = tag_lines(chunk, layout);
    let mut blocks: Vec<SceneBlock> = Vec::new();
    let mut desc_lines: Vec<&str> = Vec::new();
    let mut speaker: Option<String> = None;
    let mut dialogue_lines: Vec<&str> = Vec::new();

    let flush_desc = |blocks: &mut Vec<SceneBlock>, desc_lines: &mut Vec<&str>| {
        if !desc_lines.is_empty() {
            let text = desc_lines.join(" ");
            desc_lines.clear();
            if !text.trim().is_empty() {
                blocks.push(SceneBlock::Description(DescriptionBlock {
                    text,
                    scene_index,
                    block_index: blocks.len(),
                }));
            }
        }
    };
    let flush_utterance = |blocks: &mut Vec<SceneBlock>,
                           speaker: &mut Option<String>,
                           dialogue_lines: &mut Vec<&str>| {
        if let Some(name) = speaker.take() {
            let text = dialogue_lines.join(" ");
            dialogue_lines.clear();
            blocks.push(SceneBlock::Utterance(Utterance {
                speaker_raw: name,
                text,
                scene_index,
                block_index: blocks.len(),
            }));
        }
    };

    for (line, tag) in chunk.body.iter().zip(tags.iter()) {
        match tag {
            LineTag::Blank | LineTag::Transition => {
                flush_utterance(&mut blocks, &mut speaker, &mut dialogue_lines);
                flush_desc(&mut blocks, &mut desc_lines);
            }
            LineTag::Cue(name) => {
                flush_utterance(&mut blocks, &mut speaker, &mut dialogue_lines);
                flush_desc(&mut blocks, &mut desc_lines);
                speaker = Some(name.clone());
            }
            LineTag::Parenthetical => {}
            LineTag::Dialogue => dialogue_lines.push(line.trim()),
            LineTag::Description => {
                flush_utterance(&mut blocks, &mut speaker, &mut dialogue_lines);
                desc_lines.push(line.trim());
            }
        }
    }
    flush_utterance(&mut blocks, &mut speaker, &mut dialogue_lines);
    flush_desc(&mut blocks, &mut desc_lines);
    blocks
}

/// Parse a full script: chunk scenes, calibrate the layout, and classify
/// every scene body.
pub fn parse_script(raw_text: &str) -> Result<Vec<Scene>, ParseError> {
    let chunks = chunk_scenes(raw_text)?;
    let layout = calibrate_layout(&chunks);
    Ok(chunks
        .iter()
        .enumerate()
        .map(|(index, chunk)| Scene {
            index,
            header: parse_heading(&chunk.heading),
            blocks: parse_scene_body(chunk, index, &layout),
        })
        .collect())
}

/// Split a scene into conversations: maximal runs of consecutive utterances.
pub fn segment_conversations(scene: &Scene) -> Vec<Conversation> {
    let mut conversations: Vec<Conversation> = Vec::new();
    let mut current: Vec<Utterance> = Vec::new();
    for block in &scene.blocks {
        match block {
            SceneBlock::Utterance(u) => current.push(u.clone()),
            SceneBlock::Description(_) => {
                if !current.is_empty() {
                    conversations
                        .push(make_conversation(scene.index, std::mem::take(&mut current)));
                }
            }
        }
    }
    if !current.is_empty() {
        conversations.push(make_conversation(scene.index, current));
    }
    conversations
}

fn make_conversation(scene_index: usize, utterances: Vec<Utterance>) -> Conversation {
    let participants = utterances.iter().map(|u| u.speaker_raw.clone()).collect();
    Conversation {
        scene_index,
        utterances,
        participants,
    }
}
