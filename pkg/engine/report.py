import json
import os
from datetime import datetime

from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import getSampleStyleSheet, ParagraphStyle
from reportlab.lib.units import mm
from reportlab.platypus import (
    SimpleDocTemplate, Paragraph, Spacer, Table, TableStyle, HRFlowable
)


def generate_report(data) -> str:
    """Canonical JSON: sorted keys, two-space indent, no floats."""
    _reject_floats(data)
    return json.dumps(data, indent=2, sort_keys=True)


def _reject_floats(value, path: str = "$"):
    if isinstance(value, float):
        raise TypeError(f"float at {path}: numeric output must be exact")
    if isinstance(value, dict):
        for k, v in value.items():
            _reject_floats(v, f"{path}.{k}")
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            _reject_floats(v, f"{path}[{i}]")


# ---------------------------------------------------------------------------
# Markdown
# ---------------------------------------------------------------------------

def _component_cell(c: dict) -> str:
    extra = []
    if c.get("gonality") is not None:
        extra.append(f"gon {c['gonality']}")
    if c.get("acm") is not None:
        extra.append("ACM" if c["acm"] else "not ACM")
    if c.get("moduli_image_dim") is not None:
        extra.append(f"moduli {c['moduli_image_dim']}")
    tail = f" ({', '.join(extra)})" if extra else ""
    return f"{c['label']}: dim {c['family_dim']}{tail}"


def generate_markdown_row(row: dict) -> str:
    components = "<br>".join(_component_cell(c) for c in row["components"]) or "-"
    chi = row["bounds"].get("chi", "-")
    return (f"| {row['g']} | {row['verdict']} | {row['verdict_source']} | {chi} "
            f"| {components} | {row['engine_count']} |")


def generate_markdown_table(table: dict) -> str:
    """Classification table with one line per genus."""
    lines = [
        f"### Hilbert schemes of curves of degree {table['d']} in P^{table['r']}",
        "",
        "| g | verdict | source | expected dim | components | engine count |",
        "|---|---------|--------|--------------|------------|--------------|",
    ]
    for g in sorted(table["rows"], key=int):
        lines.append(generate_markdown_row(table["rows"][g]))
    return "\n".join(lines) + "\n"


def generate_markdown_analysis(row: dict) -> str:
    lines = [
        f"### d={row['d']}, g={row['g']}, r={row['r']}: {row['verdict']}",
        "",
        f"- verdict source: {row['verdict_source']} (engine: {row['engine_verdict']}, "
        f"{row['engine_count']} component(s))",
    ]
    bounds = ", ".join(f"{k}={v}" for k, v in sorted(row["bounds"].items()))
    lines.append(f"- bounds: {bounds}")
    if row.get("anchor"):
        lines.append(f"- reference: {row['anchor']}")
    if row["components"]:
        lines += ["", "| component | family dim | expected | gonality | ACM | moduli image |",
                  "|-----------|------------|----------|----------|-----|--------------|"]
        for c in row["components"]:
            acm = "-" if c.get("acm") is None else ("yes" if c["acm"] else "no")
            lines.append(f"| {c['label']} | {c['family_dim']} | {c['expected_dim']} "
                         f"| {c.get('gonality') or '-'} | {acm} | {c.get('moduli_image_dim', '-')} |")
    if row["absorbed"]:
        lines += ["", "Not components:"]
        lines += [f"- {a['label']}: {a['reason']}" for a in row["absorbed"]]
    if row["dual_checks"]:
        lines += ["", "Dual models:"]
        lines += [f"- {x['surface']} {x['class']}: {x['outcome']}" for x in row["dual_checks"]]
    if row["notes"]:
        lines += ["", "Notes:"]
        lines += [f"- {n}" for n in row["notes"]]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# PDF Report
# ---------------------------------------------------------------------------

VERDICT_COLORS = {
    "Irreducible": colors.HexColor("#27ae60"),
    "Reducible": colors.HexColor("#f39c12"),
    "Empty": colors.HexColor("#7f8c8d"),
}


def _styles():
    """Build a stylesheet for the PDF report."""
    ss = getSampleStyleSheet()

    ss.add(ParagraphStyle(
        "ReportTitle",
        parent=ss["Title"],
        fontSize=18,
        spaceAfter=6 * mm,
        textColor=colors.HexColor("#2c3e50"),
    ))
    ss.add(ParagraphStyle(
        "SectionHead",
        parent=ss["Heading2"],
        fontSize=13,
        spaceBefore=6 * mm,
        spaceAfter=3 * mm,
        textColor=colors.HexColor("#2c3e50"),
    ))
    ss.add(ParagraphStyle(
        "RowHead",
        parent=ss["Heading3"],
        fontSize=11,
        spaceBefore=4 * mm,
        spaceAfter=2 * mm,
    ))
    ss.add(ParagraphStyle(
        "Body",
        parent=ss["Normal"],
        fontSize=9,
        leading=12,
    ))
    ss.add(ParagraphStyle(
        "TraceText",
        parent=ss["Normal"],
        fontSize=8,
        leading=10,
        leftIndent=4 * mm,
        textColor=colors.HexColor("#7f8c8d"),
    ))
    ss.add(ParagraphStyle(
        "SmallItalic",
        parent=ss["Normal"],
        fontSize=8,
        leading=10,
        textColor=colors.grey,
    ))
    return ss


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _verdict_color(verdict: str):
    return VERDICT_COLORS.get(verdict.split("(")[0], colors.black)


def generate_pdf_report(table: dict, output_path: str) -> str:
    """Write the classification table and per-genus component detail as a PDF.

    Returns the output_path written to.
    """
    os.makedirs(os.path.dirname(output_path) or ".", exist_ok=True)

    doc = SimpleDocTemplate(
        output_path,
        pagesize=A4,
        leftMargin=18 * mm,
        rightMargin=18 * mm,
        topMargin=18 * mm,
        bottomMargin=18 * mm,
    )

    ss = _styles()
    story = []
    rows = [table["rows"][g] for g in sorted(table["rows"], key=int)]

    # --- Title ---
    story.append(Paragraph(
        f"Hilbert schemes of curves of degree {table['d']} in P<super>{table['r']}</super>",
        ss["ReportTitle"],
    ))
    story.append(Paragraph(
        f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}", ss["SmallItalic"]
    ))
    story.append(Spacer(1, 4 * mm))
    story.append(HRFlowable(
        width="100%", thickness=0.5, color=colors.HexColor("#bdc3c7")
    ))

    # --- Summary table ---
    story.append(Paragraph("Classification", ss["SectionHead"]))

    summary = [["g", "Verdict", "Source", "Expected dim", "Family dims"]]
    for row in rows:
        summary.append([
            str(row["g"]),
            row["verdict"],
            row["verdict_source"],
            str(row["bounds"].get("chi", "-")),
            ", ".join(str(c["family_dim"]) for c in row["components"]) or "-",
        ])
    t = Table(summary, colWidths=[12 * mm, 35 * mm, 22 * mm, 28 * mm, 60 * mm])
    style = [
        ("BACKGROUND", (0, 0), (-1, 0), colors.HexColor("#2c3e50")),
        ("TEXTCOLOR", (0, 0), (-1, 0), colors.white),
        ("FONTSIZE", (0, 0), (-1, -1), 9),
        ("BOTTOMPADDING", (0, 0), (-1, -1), 4),
        ("TOPPADDING", (0, 0), (-1, -1), 4),
        ("GRID", (0, 0), (-1, -1), 0.4, colors.HexColor("#bdc3c7")),
    ]
    for i, row in enumerate(rows, start=1):
        style.append(("TEXTCOLOR", (1, i), (1, i), _verdict_color(row["verdict"])))
    t.setStyle(TableStyle(style))
    story.append(t)
    story.append(Spacer(1, 4 * mm))
    story.append(HRFlowable(
        width="100%", thickness=0.5, color=colors.HexColor("#bdc3c7")
    ))

    # --- Per-genus detail ---
    story.append(Paragraph("Genus-wise Analysis", ss["SectionHead"]))

    for row in rows:
        color = _verdict_color(row["verdict"])
        story.append(Paragraph(
            f'g = {row["g"]}: <font color="{color.hexval()}">{row["verdict"]}</font>'
            f'  (engine: {row["engine_verdict"]}, {row["engine_count"]} component(s))',
            ss["RowHead"],
        ))
        if row.get("anchor"):
            story.append(Paragraph(f"<i>{_escape(row['anchor'])}</i>", ss["TraceText"]))

        if row["components"]:
            header = [Paragraph(f"<b>{h}</b>", ss["Body"])
                      for h in ("Component", "Dim", "Gonality", "ACM", "Moduli")]
            body = [header]
            for c in row["components"]:
                acm = "-" if c.get("acm") is None else ("yes" if c["acm"] else "no")
                body.append([
                    Paragraph(_escape(c["label"]), ss["Body"]),
                    Paragraph(str(c["family_dim"]), ss["Body"]),
                    Paragraph(str(c.get("gonality") or "-"), ss["Body"]),
                    Paragraph(acm, ss["Body"]),
                    Paragraph(str(c.get("moduli_image_dim", "-")), ss["Body"]),
                ])
            ct = Table(body, colWidths=[70 * mm, 20 * mm, 22 * mm, 18 * mm, 25 * mm])
            ct.setStyle(TableStyle([
                ("BACKGROUND", (0, 0), (-1, 0), colors.HexColor("#ecf0f1")),
                ("FONTSIZE", (0, 0), (-1, -1), 8),
                ("BOTTOMPADDING", (0, 0), (-1, -1), 3),
                ("TOPPADDING", (0, 0), (-1, -1), 3),
                ("GRID", (0, 0), (-1, -1), 0.3, colors.HexColor("#bdc3c7")),
                ("VALIGN", (0, 0), (-1, -1), "TOP"),
            ]))
            story.append(ct)

        for a in row["absorbed"]:
            story.append(Paragraph(
                f"• {_escape(a['label'])}: {_escape(a['reason'])}", ss["TraceText"]
            ))
        for note in row["notes"]:
            story.append(Paragraph(f"<i>{_escape(note)}</i>", ss["TraceText"]))

        story.append(Spacer(1, 3 * mm))

    doc.build(story)
    return output_path
