"""
Verification metrics and experiments

Only the metrics are imported here; the experiment harnesses depend on the
auth package, which itself depends on these metrics.
"""

from .metrics import Rates, RocCurve, auc, rates_at, roc_curve

__all__ = ['Rates', 'RocCurve', 'auc', 'rates_at', 'roc_curve']
