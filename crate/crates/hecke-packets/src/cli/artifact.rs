//! Rendering of command results into the three output formats. All output
//! is UTF-8 with LF line endings and a trailing newline; JSON keys appear
//! in a fixed order, so repeated runs are byte-identical.

use crate::characters::LPacket;
use crate::correspondence::CorrespondenceReport;
use crate::counting::CountReport;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "table",
        }
    }
}

#[derive(Serialize)]
struct CharacterJson {
    lambda: Vec<u32>,
    #[serde(rename = "J")]
    j: Vec<usize>,
}

fn character_json(chi: &crate::characters::SupersingularCharacter) -> CharacterJson {
    CharacterJson {
        lambda: chi.lambda().entries().to_vec(),
        j: chi.j().to_vec(),
    }
}

#[derive(Serialize)]
struct PacketJson {
    n: usize,
    q: u64,
    size: usize,
    regular: bool,
    representative: CharacterJson,
    members: Vec<CharacterJson>,
}

fn packet_json(packet: &LPacket) -> PacketJson {
    PacketJson {
        n: packet.n(),
        q: packet.q(),
        size: packet.size(),
        regular: packet.regular(),
        representative: character_json(packet.representative()),
        members: packet.members().iter().map(character_json).collect(),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("artifacts are plain data");
    out.push('\n');
    out
}

fn join_indices<I: IntoIterator<Item = usize>>(indices: I) -> String {
    indices
        .into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn join_entries(entries: &[u32]) -> String {
    entries
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Render rows as aligned plain-text columns under a header.
fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let emit = |cells: Vec<String>, out: &mut String| {
        let line: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:width$}", c, width = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    emit(header.iter().map(|h| h.to_string()).collect(), &mut out);
    for row in rows {
        emit(row.clone(), &mut out);
    }
    out
}

fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

// ---- enumerate ----------------------------------------------------------

#[derive(Serialize)]
struct EnumerateJson {
    schema: u32,
    command: &'static str,
    n: usize,
    q: u64,
    character_count: usize,
    packet_count: usize,
    packets: Vec<PacketJson>,
}

pub fn render_enumerate(n: usize, q: u64, packets: &[LPacket], format: Format) -> String {
    match format {
        Format::Json => to_json(&EnumerateJson {
            schema: SCHEMA_VERSION,
            command: "enumerate",
            n,
            q,
            character_count: packets.iter().map(|p| p.size()).sum(),
            packet_count: packets.len(),
            packets: packets.iter().map(packet_json).collect(),
        }),
        Format::Csv | Format::Table => {
            let header = ["packet", "size", "regular", "lambda", "J"];
            let rows: Vec<Vec<String>> = packets
                .iter()
                .enumerate()
                .flat_map(|(pi, packet)| {
                    packet.members().iter().map(move |chi| {
                        vec![
                            pi.to_string(),
                            packet.size().to_string(),
                            packet.regular().to_string(),
                            join_entries(chi.lambda().entries()),
                            join_indices(chi.j().iter()),
                        ]
                    })
                })
                .collect();
            match format {
                Format::Csv => render_csv(&header, &rows),
                _ => render_table(&header, &rows),
            }
        }
    }
}

// ---- count ---------------------------------------------------------------

#[derive(Serialize)]
struct CountJson<'a> {
    schema: u32,
    command: &'static str,
    brute: bool,
    reports: &'a [CountReport],
    all_matched: bool,
}

pub fn render_count(reports: &[CountReport], brute: bool, format: Format) -> String {
    let all_matched = reports.iter().all(|r| r.matched);
    match format {
        Format::Json => to_json(&CountJson {
            schema: SCHEMA_VERSION,
            command: "count",
            brute,
            reports,
            all_matched,
        }),
        Format::Csv | Format::Table => {
            let header = [
                "n", "q", "d", "g_closed", "g_brute", "h_closed", "h_brute", "matched",
            ];
            let rows: Vec<Vec<String>> = reports
                .iter()
                .flat_map(|report| {
                    report.rows.iter().map(move |row| {
                        vec![
                            report.n.to_string(),
                            report.q.to_string(),
                            row.d.to_string(),
                            row.g_closed.clone(),
                            row.g_brute.clone().unwrap_or_default(),
                            row.h_closed.clone(),
                            row.h_brute.clone().unwrap_or_default(),
                            report.matched.to_string(),
                        ]
                    })
                })
                .collect();
            match format {
                Format::Csv => render_csv(&header, &rows),
                _ => render_table(&header, &rows),
            }
        }
    }
}

// ---- correspond ------------------------------------------------------------

#[derive(Serialize)]
struct TallyJson {
    d: usize,
    regular_packets: u64,
    projective_classes: u64,
}

#[derive(Serialize)]
struct MatchJson {
    packet: PacketJson,
    r_values: Vec<String>,
    class_representative: String,
    d_sigma: usize,
    matched: bool,
}

#[derive(Serialize)]
struct NonRegularJson {
    packet: PacketJson,
    r_values: Vec<String>,
}

#[derive(Serialize)]
struct CorrespondJson {
    schema: u32,
    command: &'static str,
    n: usize,
    p: u64,
    bijection: bool,
    tallies: Vec<TallyJson>,
    matching: Vec<MatchJson>,
    non_regular: Vec<NonRegularJson>,
}

pub fn render_correspond(report: &CorrespondenceReport, format: Format) -> String {
    match format {
        Format::Json => to_json(&CorrespondJson {
            schema: SCHEMA_VERSION,
            command: "correspond",
            n: report.n,
            p: report.p,
            bijection: report.bijection,
            tallies: report
                .tallies
                .iter()
                .map(|t| TallyJson {
                    d: t.d,
                    regular_packets: t.regular_packets,
                    projective_classes: t.projective_classes,
                })
                .collect(),
            matching: report
                .matching
                .iter()
                .map(|m| MatchJson {
                    packet: packet_json(&m.packet),
                    r_values: m.r_values.iter().map(|r| r.to_string()).collect(),
                    class_representative: m.class_representative.to_string(),
                    d_sigma: m.d_sigma,
                    matched: m.matched,
                })
                .collect(),
            non_regular: report
                .non_regular
                .iter()
                .map(|e| NonRegularJson {
                    packet: packet_json(&e.packet),
                    r_values: e.r_values.iter().map(|r| r.to_string()).collect(),
                })
                .collect(),
        }),
        Format::Csv | Format::Table => {
            let header = [
                "packet",
                "size",
                "regular",
                "r_values",
                "class_representative",
                "d_sigma",
                "matched",
            ];
            let mut rows: Vec<Vec<String>> = Vec::new();
            for (pi, m) in report.matching.iter().enumerate() {
                rows.push(vec![
                    pi.to_string(),
                    m.packet.size().to_string(),
                    "true".to_string(),
                    m.r_values
                        .iter()
                        .map(|r| r.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                    m.class_representative.to_string(),
                    m.d_sigma.to_string(),
                    m.matched.to_string(),
                ]);
            }
            for (offset, e) in report.non_regular.iter().enumerate() {
                rows.push(vec![
                    (report.matching.len() + offset).to_string(),
                    e.packet.size().to_string(),
                    "false".to_string(),
                    e.r_values
                        .iter()
                        .map(|r| r.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                    String::new(),
                    String::new(),
                    "false".to_string(),
                ]);
            }
            match format {
                Format::Csv => render_csv(&header, &rows),
                _ => render_table(&header, &rows),
            }
        }
    }
}
