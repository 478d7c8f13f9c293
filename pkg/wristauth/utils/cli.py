"""
Command Line Interface for WristAuth
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import yaml
from colorama import Fore, Style, init

from .. import __version__
from ..auth.scoring import ScoreReport
from ..core.app import BaselineOutcome, CalibrationOutcome, WristAuthApp
from ..core.config import Config, preset_names
from ..core.exceptions import WristAuthError
from ..core.logger import LoggerMixin, setup_logging
from ..evaluation.report import EvalReport
from ..motion.models import CHANNELS
from ..storage.manifest import to_plain

EXIT_OK = 0
EXIT_DENY = 1
EXIT_ERROR = 2


class CommandLine(LoggerMixin):
    """Runs one parsed command against the application and renders the result"""

    def __init__(self, app: WristAuthApp, color: bool = True):
        """
        Initialize the command line renderer

        Args:
            app: WristAuth application instance
            color: Emit ANSI colors
        """
        self.app = app
        init(strip=not color)

    def run(self, args: argparse.Namespace) -> int:
        """Dispatch a parsed command; returns the process exit status"""
        handler = getattr(self, f"_cmd_{args.command}")
        try:
            return handler(args)
        except (WristAuthError, OSError, ValueError) as e:
            self.logger.error(f"{args.command} failed: {e}")
            return EXIT_ERROR

    def _cmd_enroll(self, args: argparse.Namespace) -> int:
        profile = self.app.enroll(args.trials, args.out)
        print(f"{Fore.GREEN}Enrolled {profile.n} trials{Style.RESET_ALL} -> {args.out}")
        print(f"  ideal distance e: {self._row(profile.ideal.tolist())}")
        print(f"  threshold: {profile.threshold_delta}")
        print(f"  weights mu: {self._row(list(profile.weights_mu))}")
        return EXIT_OK

    def _cmd_verify(self, args: argparse.Namespace) -> int:
        report = self.app.verify(args.probe, args.profile, threshold=args.threshold)
        self._show_score(report)
        return EXIT_OK if report.accepted else EXIT_DENY

    def _cmd_calibrate(self, args: argparse.Namespace) -> int:
        outcome = self.app.calibrate(args.genuine, args.impostor, args.profile)
        self._show_calibration(outcome)
        return EXIT_OK

    def _cmd_evaluate(self, args: argparse.Namespace) -> int:
        report = self.app.evaluate(args.manifest, args.out)
        self._show_evaluation(report, args.out)
        return EXIT_OK

    def _cmd_synth(self, args: argparse.Namespace) -> int:
        manifest = self.app.synth(args.out_dir, force=args.force)
        print(f"{Fore.GREEN}Synthetic dataset written{Style.RESET_ALL} -> {manifest}")
        return EXIT_OK

    def _cmd_baseline(self, args: argparse.Namespace) -> int:
        outcome = self.app.baseline(args.manifest, args.out)
        self._show_baseline(outcome)
        return EXIT_OK

    @staticmethod
    def _row(values) -> str:
        return "  ".join(f"{c}={v:.4f}" for c, v in zip(CHANNELS, values))

    def _show_score(self, report: ScoreReport):
        color = Fore.GREEN if report.accepted else Fore.RED
        print(yaml.safe_dump(to_plain(report.to_dict()), default_flow_style=False, sort_keys=True), end="")
        print(f"{color}{report.decision.value.upper()}{Style.RESET_ALL} "
              f"(tss {report.tss:.4f}, threshold {report.threshold})")

    def _show_calibration(self, outcome: CalibrationOutcome):
        print(f"{Fore.CYAN}Calibrated from {outcome.n_genuine} genuine and "
              f"{outcome.n_impostor} impostor probes{Style.RESET_ALL}")
        print(f"  AUC:     {self._row(outcome.aucs)}")
        print(f"  weights: {self._row(outcome.weights)}")
        print(f"Profile updated -> {outcome.profile_path}")

    def _show_evaluation(self, report: EvalReport, out: Path):
        print(f"{Fore.CYAN}Evaluation at threshold {report.discrimination.threshold}{Style.RESET_ALL}")
        print(f"  FNR {report.fnr:.4f}  FPR {report.fpr:.4f}  TPR {report.tpr:.4f}  AUC {report.auc_total:.4f}")
        if report.attacks is not None:
            for summary in report.attacks.scenarios:
                print(f"  {summary.name:<12} median tss {summary.median_tss:.4f}  "
                      f"accepted {summary.acceptance:.0%}")
        for point in report.fault_tolerance:
            print(f"  bad {point.bad_fraction:.0%}: TPR {point.tpr:.4f}  bad accepted {point.bad_acceptance:.0%}")
        print(f"Report written -> {out}")

    def _show_baseline(self, outcome: BaselineOutcome):
        report = outcome.report
        print(f"{Fore.CYAN}Closed-set baseline{Style.RESET_ALL}")
        for row in report['cross_validation']:
            print(f"  {row['features']:<5} {row['selection']:<6} accuracy {row['accuracy']:.4f}  "
                  f"mAP {row['map']:.4f}  features {row['n_features']}")
        flaw = report['open_set']
        print(f"  unseen words labeled by classifier: {flaw['labeled_fraction']:.0%}")
        print(f"  unseen words denied by verifier:    {flaw['denial_rate']:.0%}")
        for path in outcome.written:
            print(f"  wrote {path}")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for every subcommand"""
    parser = argparse.ArgumentParser(
        prog="wristauth",
        description="WristAuth - handwriting verification from wrist motion",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  wristauth synth data/                                   # Generate the synthetic dataset
  wristauth enroll t1.csv t2.csv t3.csv -o me.profile.yaml
  wristauth verify probe.csv me.profile.yaml              # Exit 0 accept, 1 deny
  wristauth --preset hardened evaluate data/ -o report.yaml
  wristauth baseline data/ -o baseline/
        """
    )

    parser.add_argument("--config", type=str, default=None,
                        help="Path to configuration file (default: built-in defaults)")
    parser.add_argument("--seed", type=int, default=None, help="Master seed")
    parser.add_argument("--delta", type=float, default=None, help="Decision threshold")
    parser.add_argument("--preset", choices=preset_names(), default=None,
                        help="Named decision threshold")
    parser.add_argument("--window", type=int, default=None, help="Smoothing window length")
    parser.add_argument("--degree", type=int, default=None, help="Smoothing polynomial degree")
    parser.add_argument("--workers", type=int, default=None, help="DTW worker threads")
    parser.add_argument("--log-level", type=str, default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help="Logging level (default: logging.level from the config)")
    parser.add_argument("--no-color", action="store_true", help="Disable colored output")
    parser.add_argument("--version", action="version", version=f"WristAuth v{__version__}")

    commands = parser.add_subparsers(dest="command", required=True)

    enroll = commands.add_parser("enroll", help="Train a profile from enrollment trials")
    enroll.add_argument("trials", nargs="+", help="Trial files (.csv or .jsonl)")
    enroll.add_argument("-o", "--out", required=True, help="Profile destination")

    verify = commands.add_parser("verify", help="Accept or deny a probe")
    verify.add_argument("probe", help="Probe trial file")
    verify.add_argument("profile", help="Profile file")

    calibrate = commands.add_parser("calibrate", help="Calibrate a profile's dimension weights")
    calibrate.add_argument("genuine", help="Directory of genuine trials or score files")
    calibrate.add_argument("impostor", help="Directory of impostor trials or score files")
    calibrate.add_argument("profile", help="Profile file, rewritten in place")

    evaluate = commands.add_parser("evaluate", help="Run the evaluation experiments")
    evaluate.add_argument("manifest", help="Dataset manifest or its directory")
    evaluate.add_argument("-o", "--out", default="report.yaml", help="Report destination")

    synth = commands.add_parser("synth", help="Generate a synthetic dataset")
    synth.add_argument("out_dir", help="Output directory")
    synth.add_argument("--force", action="store_true", help="Write into a non-empty directory")

    baseline = commands.add_parser("baseline", help="Closed-set classifier contrast")
    baseline.add_argument("manifest", help="Dataset manifest or its directory")
    baseline.add_argument("-o", "--out", default="baseline", help="Output directory")

    return parser


def apply_overrides(config: Config, args: argparse.Namespace) -> Optional[float]:
    """
    Apply flag overrides to the configuration

    Returns:
        The threshold the flags select, or None when neither --preset nor --delta was given
    """
    if args.seed is not None:
        config.set('seed', args.seed)
    if args.window is not None:
        config.set('filter.window', args.window)
    if args.degree is not None:
        config.set('filter.degree', args.degree)
    if args.workers is not None:
        config.set('dtw.workers', args.workers)
    if args.preset is not None:
        config.apply_preset(args.preset)
    if args.delta is not None:
        config.set('auth.threshold', args.delta)
    config.validate()
    if args.preset is None and args.delta is None:
        return None
    return config.get_auth_params()['threshold']


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for WristAuth"""
    args = build_parser().parse_args(argv)
    logger = logging.getLogger(__name__)

    try:
        config = Config(args.config)
        setup_logging(
            level=args.log_level or config.get("logging.level"),
            log_file=config.get("logging.file_path"),
            log_format=config.get("logging.format"),
        )
        args.threshold = apply_overrides(config, args)
    except (FileNotFoundError, RuntimeError, ValueError) as e:
        setup_logging(level=args.log_level or "INFO")
        logger.error(f"Configuration error: {e}")
        return EXIT_ERROR

    app = WristAuthApp(config)
    try:
        return CommandLine(app, color=not args.no_color).run(args)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
