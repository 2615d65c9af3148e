"""Static log-log SVG charts for sweep results.

One line per record group (records sharing everything but the x axis),
error bars of +/- 2 standard errors when plotting the mean error, and an
optional dashed overlay of the mean-bound shape.
"""

from .errors import BadParamsError

_Y_CHOICES = ("mean_error", "mean_error_psd", "bound_mean")


def _axis_value(rec, axis):
    if axis == "m":
        try:
            return int(rec["m_or_support"])
        except ValueError:
            raise BadParamsError(
                f"record with mask={rec['mask']!r} has no integer bandwidth") from None
    return int(rec[axis])


def _group_key(rec, axis):
    keys = [k for k in ("p", "n", "mask", "m_or_support") if k != axis]
    if axis == "m":
        keys.remove("m_or_support")
    return tuple((k, rec[k]) for k in keys)


def plot_sweep(records, x_axis, y_column, out_path, overlay_bound=False):
    """Render sweep records as a log-log SVG line chart.

    Parameters
    ----------
    records : list of dict
        Parsed sweep CSV rows (see ``toepcov.io.read_sweep_csv``).
    x_axis : {"n", "p", "m"}
    y_column : {"mean_error", "mean_error_psd", "bound_mean"}
    out_path : str
        Output SVG path.
    overlay_bound : bool
        Also draw the bound_mean shape per group, dashed.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if x_axis not in ("n", "p", "m"):
        raise BadParamsError(f"x axis must be n, p or m, not {x_axis!r}")
    if y_column not in _Y_CHOICES:
        raise BadParamsError(f"y column must be one of {_Y_CHOICES}")
    if not records:
        raise BadParamsError("no records to plot")

    groups = {}
    for rec in records:
        groups.setdefault(_group_key(rec, x_axis), []).append(rec)

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for key, recs in sorted(groups.items()):
        recs = sorted(recs, key=lambda r: _axis_value(r, x_axis))
        xs = [_axis_value(r, x_axis) for r in recs]
        ys = [r[y_column] for r in recs]
        label = ", ".join(f"{k}={v}" for k, v in key if v != "")
        if y_column == "mean_error":
            bars = [2.0 * r["std_error"] for r in recs]
            ax.errorbar(xs, ys, yerr=bars, marker="o", capsize=3, label=label)
        else:
            ax.plot(xs, ys, marker="o", label=label)
        if overlay_bound and y_column != "bound_mean":
            ax.plot(xs, [r["bound_mean"] for r in recs], linestyle="--",
                    label=f"{label} (bound shape)" if label else "bound shape")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(x_axis)
    ax.set_ylabel(y_column)
    ax.grid(True, which="both", alpha=0.3)
    if any(key for key in groups):
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, format="svg")
    plt.close(fig)
