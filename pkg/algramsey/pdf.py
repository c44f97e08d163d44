from xml.sax.saxutils import escape

from reportlab.lib import colors
from reportlab.lib.enums import TA_CENTER
from reportlab.lib.pagesizes import letter
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.pdfbase.pdfmetrics import stringWidth
from reportlab.pdfgen import canvas
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from algramsey.suites._base import SuiteRow

FONT_NAME = "Courier"
FONT_NAME_BOLD = "Courier-Bold"
FONT_SIZE = 8
CELL_PADDING = 12
# reportlab table sizing is based on absolute widths; keep these constants together for consistency


def generate_sweep_pdf(sweeps, output_path, title="Verification sweep", seed=0):
    """
    Render verification sweeps as a summary table followed by one table per suite.

    Args:
        sweeps: Sequence of (suite_name, suite_title, bound_name, rows) with rows a list of SuiteRow.
        output_path (str|Path): Where the PDF is written.
        title (str): Document title.
        seed (int): Root seed, printed under the title.

    Returns:
        str: Path to the generated PDF.
    """

    pdf_path = str(output_path)
    # invariant output: no timestamps or random document ids
    doc = SimpleDocTemplate(pdf_path, pagesize=letter, topMargin=0.75 * inch, invariant=1, title=title)
    available_width = letter[0] - doc.leftMargin - doc.rightMargin

    styles = getSampleStyleSheet()
    heading_style = ParagraphStyle(name="CenteredHeading", parent=styles["Heading2"], alignment=TA_CENTER)

    elements = [
        Paragraph(escape(title), styles["Title"]),
        Paragraph(f"seed {seed}", styles["Normal"]),
        Spacer(1, 6),
        _build_summary_table(sweeps, available_width),
    ]
    for _, suite_title, bound_name, rows in sweeps:
        elements += [
            Spacer(1, 12),
            Paragraph(escape(suite_title), heading_style),
            Paragraph(escape(bound_name), styles["Normal"]),
            Spacer(1, 4),
            _build_rows_table(rows, available_width),
        ]

    # custom canvas prints "Page X of Y" in the footer
    doc.build(elements, canvasmaker=NumberedCanvas)
    return pdf_path


def _build_summary_table(sweeps, available_width):
    """Build the per-suite pass/fail count table."""

    data = [["Suite", "Checks", "Passed", "Failed"]]
    for name, _, _, rows in sweeps:
        passed = sum(1 for row in rows if row.passed)
        data.append([name, str(len(rows)), str(passed), str(len(rows) - passed)])
    table = Table(data, colWidths=_compute_scaled_col_widths(data, available_width), repeatRows=1)
    table.setStyle(_base_style())
    return table


def _build_rows_table(rows: list[SuiteRow], available_width):
    """Build one suite's check table; failed rows are shaded."""

    data = [["Check", "Params", "Observed", "Bound", "Result"]]
    data += [[row.check, row.params, row.observed, row.bound, "pass" if row.passed else "FAIL"] for row in rows]
    table = Table(data, colWidths=_compute_scaled_col_widths(data, available_width), repeatRows=1)
    commands = [("ALIGN", (1, 1), (1, -1), "LEFT")]
    for index, row in enumerate(rows, start=1):
        if not row.passed:
            commands.append(("BACKGROUND", (0, index), (-1, index), colors.mistyrose))
    table.setStyle(TableStyle(_base_style().getCommands() + commands))
    return table


def _base_style():
    return TableStyle(
        [
            ("BACKGROUND", (0, 0), (-1, 0), colors.lightgrey),
            ("TEXTCOLOR", (0, 0), (-1, 0), colors.black),
            ("GRID", (0, 0), (-1, -1), 0.25, colors.grey),
            ("ALIGN", (0, 0), (-1, -1), "CENTER"),
            ("FONTNAME", (0, 0), (-1, 0), FONT_NAME_BOLD),
            ("FONTNAME", (0, 1), (-1, -1), FONT_NAME),
            ("FONTSIZE", (0, 0), (-1, -1), FONT_SIZE),
        ]
    )


def _compute_scaled_col_widths(data, total_width, font_name=FONT_NAME, font_size=FONT_SIZE, padding=CELL_PADDING):
    """Compute column widths scaled to fit the available page width to avoid overflow or truncation."""

    num_cols = len(data[0])
    max_widths = [0] * num_cols
    for row in data:
        for idx, cell in enumerate(row):
            max_widths[idx] = max(max_widths[idx], stringWidth(str(cell), font_name, font_size))
    raw_widths = [width + padding for width in max_widths]
    raw_total = sum(raw_widths)
    return [width * total_width / raw_total for width in raw_widths]


class NumberedCanvas(canvas.Canvas):
    """Canvas subclass that prints 'Page X of Y' in the footer."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._saved_page_states = []

    def showPage(self):
        self._saved_page_states.append(dict(self.__dict__))
        self._startPage()

    def save(self):
        num_pages = len(self._saved_page_states)
        for state in self._saved_page_states:
            self.__dict__.update(state)
            self.draw_page_number(num_pages)
            super().showPage()
        super().save()

    def draw_page_number(self, total):
        self.setFont(FONT_NAME, FONT_SIZE)
        text = f"Page {self.getPageNumber()} of {total}"
        self.drawCentredString(self._pagesize[0] / 2, 0.5 * inch, text)
