"""Reproducible CSV and text output.

Every number is written as ``%.16e`` (17 significant digits), so identical
inputs give byte-identical files.
"""
import csv
import io

import numpy as np

from . import __version__


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.16e}"


def header_lines(meta: dict) -> list:
    lines = [f"# nanorabi {__version__}"]
    for key, value in meta.items():
        if isinstance(value, (list, tuple)):
            value = ",".join(fmt(v) if not isinstance(v, str) else v for v in value)
        elif not isinstance(value, str) and value is not None:
            value = fmt(value)
        lines.append(f"# {key} = {value}")
    return lines


def csv_text(meta: dict, columns, rows) -> str:
    buf = io.StringIO()
    for line in header_lines(meta):
        buf.write(line + "\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def correlation_rows(series):
    return zip(series.tau, series.values.real, series.values.imag)


def spectrum_rows(spectrum):
    return zip(spectrum.omega, spectrum.values)


def peak_rows(peakset):
    return [(i + 1, pk.center, pk.height, pk.half_width) for i, pk in enumerate(peakset.peaks)]


def peak_meta(peakset, prefix="") -> dict:
    meta = {f"{prefix}n_peaks": len(peakset.peaks)}
    for i, pk in enumerate(peakset.peaks, start=1):
        meta[f"{prefix}peak_{i}"] = (pk.center, pk.height, pk.half_width)
    meta[f"{prefix}splitting"] = "none" if peakset.splitting is None else peakset.splitting
    return meta


def peaks_text(peakset) -> str:
    """``key: value`` block describing a peak set."""
    lines = [f"n_peaks: {len(peakset.peaks)}"]
    for i, pk in enumerate(peakset.peaks, start=1):
        lines.append(f"peak_{i}_center: {fmt(pk.center)}")
        lines.append(f"peak_{i}_height: {fmt(pk.height)}")
        lines.append(f"peak_{i}_half_width: {fmt(pk.half_width)}")
    split = peakset.splitting
    lines.append(f"splitting: {'none' if split is None else fmt(split)}")
    return "\n".join(lines) + "\n"


def read_csv(text: str):
    """Parse output written by :func:`csv_text` into ``(meta, columns, array)``."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep:
                meta[key.strip()] = value.strip()
        elif line:
            body.append(line)
    rows = list(csv.reader(body))
    columns = rows[0]
    data = np.array([[float(v) for v in r] for r in rows[1:]]) if len(rows) > 1 \
        else np.empty((0, len(columns)))
    return meta, columns, data
