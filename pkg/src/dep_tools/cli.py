"""
DEP-TOOLS Command-Line Interface
================================

Main CLI entry point: train, parse, eval, bench and convlab.

CoNLL and report output goes to stdout, progress and diagnostics to
stderr. Exit codes: 0 success, 1 usage error, 2 data or format error,
3 internal contract violation or training failure.
"""

import json
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence, TextIO

import click
import pandas as pd
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from dep_tools import config
from dep_tools.convlab.bounds import run_convergence_experiment
from dep_tools.convlab.generator import SeparableSpec
from dep_tools.corpus.conll import (
    Example,
    parse_conll,
    parse_conll_sentences,
    trainable_examples,
    write_conll,
)
from dep_tools.corpus.tree import DependencyTree
from dep_tools.decoder.parser import DependencyParser
from dep_tools.evalbench.accuracy import corpus_uas, evaluate_parser, learning_curve
from dep_tools.evalbench.bench import BenchConfig, bench, results_table, write_csv, write_records
from dep_tools.exceptions import ContractViolation, DataError, TrainingError
from dep_tools.features.config import FeatureConfig
from dep_tools.model.io import load_model, save_model
from dep_tools.reporting import ReportConfig, ReportGenerator
from dep_tools.trainer.config import Backend, TrainConfig, TrainMode
from dep_tools.trainer.engine import train as train_model
from dep_tools.trainer.full_delay import DEFAULT_MAX_STEPS, run_full_delay
from dep_tools.trainer.trace import TraceWriter
from dep_tools.utils.debug_logger import debug_log

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

FULL_DELAY_MODE = "full-delay"
MODES = [mode.value for mode in TrainMode] + [FULL_DELAY_MODE]
BACKENDS = [backend.value for backend in Backend]

console = Console()
err_console = Console(stderr=True)


def _read_examples(stream: TextIO) -> List[Example]:
    return parse_conll(stream.read())


def _feature_config(hash_bits: int, order: int) -> FeatureConfig:
    try:
        return FeatureConfig(hash_bits=hash_bits, order=order)
    except ValidationError as e:
        raise click.UsageError(str(e))


def _report(kind: str, data: Any, output: Optional[str]) -> None:
    if output is None:
        return
    generator = ReportGenerator(ReportConfig(output_dir=Path(output)))
    paths = generator.generate_reports(kind, data)
    err_console.print(f"[bold]Reports saved to:[/bold] [green]{Path(output) / 'latest'}[/green]")
    for report_type, path in paths.items():
        err_console.print(f"  • {report_type}: {path}")


@click.group()
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR']),
              default=None, help='Diagnostic log level (stderr)')
def cli(log_level):
    """DEP-TOOLS dependency parser training and convergence experiments"""
    debug_log.set_level(log_level or config.LOG_LEVEL)


@cli.command('train')
@click.argument('corpus', type=click.File('r', encoding='utf-8'))
@click.option('--model', 'model_path', type=click.Path(dir_okay=False), required=True,
              help='Where to write the averaged weights')
@click.option('--order', type=click.Choice(['1', '2']), default=str(config.ORDER),
              help='Factorization order')
@click.option('--mode', type=click.Choice(MODES), default=TrainMode.SEQUENTIAL.value,
              help='Training regime')
@click.option('--threads', type=int, default=None,
              help='Parallel workers k (default 1 for sequential)')
@click.option('--epochs', type=int, default=config.EPOCHS, help='Passes over the corpus')
@click.option('--hash-bits', type=int, default=config.HASH_BITS,
              help='log2 of the weight table size')
@click.option('--seed', type=int, default=config.SEED, help='Shuffling seed')
@click.option('--backend', type=click.Choice(BACKENDS), default=config.BACKEND,
              help='Run parallel workers as processes or threads')
@click.option('--shuffle/--no-shuffle', default=True, help='Shuffle the corpus every epoch')
@click.option('--trace', 'trace_path', type=click.Path(dir_okay=False), default=None,
              help='JSON-lines trace (default: <model>.trace.jsonl)')
@click.option('--until-converged', is_flag=True,
              help='Stop early after an epoch without mistakes')
@click.option('--max-steps', type=int, default=DEFAULT_MAX_STEPS,
              help='Step cap for the full-delay mode')
@click.option('--heldout', type=click.File('r', encoding='utf-8'), default=None,
              help='Held-out CoNLL file; prints UAS after every epoch')
def train(corpus, model_path, order, mode, threads, epochs, hash_bits, seed, backend, shuffle,
          trace_path, until_converged, max_steps, heldout):
    """Train a perceptron parser on a CoNLL-X corpus ("-" reads stdin)"""
    feature_config = _feature_config(hash_bits, int(order))
    examples, stats = trainable_examples(_read_examples(corpus))
    if stats['kept'] < stats['total']:
        err_console.print(
            f"[yellow]Skipping {stats['total'] - stats['kept']} of {stats['total']} sentences "
            f"outside the decoder's search space[/yellow]"
        )
    trace_path = trace_path or f"{model_path}.trace.jsonl"

    if mode == FULL_DELAY_MODE:
        if heldout is not None:
            raise click.UsageError("--heldout is not supported with --mode full-delay")
        with TraceWriter.open(trace_path) as writer:
            trace, model = run_full_delay(
                examples, feature_config, threads or 1, max_steps, trace_writer=writer
            )
    else:
        if threads is None:
            threads = 1 if mode == TrainMode.SEQUENTIAL.value else config.THREADS
        try:
            train_config = TrainConfig(
                epochs=epochs,
                threads=threads,
                mode=TrainMode(mode),
                seed=seed,
                order=int(order),
                shuffle=shuffle,
                backend=Backend(backend),
                stop_when_converged=until_converged,
            )
        except ValidationError as e:
            raise click.UsageError(str(e))

        with TraceWriter.open(trace_path) as writer:
            if heldout is not None:
                curve_callback = _heldout_printer(_read_examples(heldout), feature_config)
                model, trace = train_model(
                    examples, feature_config, train_config, writer, epoch_callback=curve_callback
                )
            else:
                model, trace = train_model(examples, feature_config, train_config, writer)

    save_model(model_path, model.averaged_weights(), feature_config)

    table = Table(title="Training Summary")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="yellow")
    table.add_row("Sentences", str(len(examples)))
    table.add_row("Mode", f"{trace.mode} (k={trace.k})")
    table.add_row("Time steps", str(trace.time_steps))
    table.add_row("Updates", str(trace.total_updates))
    table.add_row("Converged", str(trace.converged))
    table.add_row("Model", str(model_path))
    table.add_row("Trace", str(trace_path))
    err_console.print(table)


def _heldout_printer(heldout: Sequence[Example], feature_config: FeatureConfig):
    """Epoch callback printing held-out UAS of the averaged weights"""
    def after_epoch(record, model) -> None:
        parser = DependencyParser(model.averaged_weights(), feature_config)
        result = evaluate_parser(parser, heldout)
        err_console.print(f"epoch {record.epoch}: held-out UAS {100 * result.uas:.2f}")

    return after_epoch


@cli.command('parse')
@click.argument('input_file', metavar='INPUT', type=click.File('r', encoding='utf-8'),
                default='-')
@click.option('--model', 'model_path', type=click.Path(exists=True, dir_okay=False),
              required=True, help='Model file written by train')
@click.option('--out', type=click.File('w', encoding='utf-8'), default='-',
              help='Where to write the parsed CoNLL (default stdout)')
def parse(input_file, model_path, out):
    """Predict heads for a CoNLL-X file; gold heads in the input are ignored"""
    weights, feature_config = load_model(model_path)
    sentences = parse_conll_sentences(input_file.read())
    parser = DependencyParser(weights, feature_config)
    trees = parser.parse_all(sentences)
    out.write(write_conll(list(zip(sentences, trees))))
    debug_log.cli(f"Parsed {len(sentences)} sentences", extra={'model': str(model_path)})


@cli.command('eval')
@click.argument('gold', type=click.File('r', encoding='utf-8'))
@click.argument('predicted', type=click.File('r', encoding='utf-8'), default='-')
def evaluate(gold, predicted):
    """Unlabeled attachment score of PREDICTED against GOLD"""
    gold_examples = _read_examples(gold)
    pred_examples = _read_examples(predicted)
    if len(gold_examples) != len(pred_examples):
        raise DataError(
            f"gold has {len(gold_examples)} sentences, predicted has {len(pred_examples)}"
        )
    for index, ((gold_sentence, _), (pred_sentence, _)) in enumerate(
        zip(gold_examples, pred_examples), start=1
    ):
        if len(gold_sentence) != len(pred_sentence):
            raise DataError(
                f"sentence {index}: gold has {len(gold_sentence)} tokens, "
                f"predicted has {len(pred_sentence)}"
            )
    pred_trees: List[DependencyTree] = [tree for _, tree in pred_examples]
    result = corpus_uas(pred_trees, [tree for _, tree in gold_examples])
    click.echo(f"UAS {100 * result.uas:.2f}")


@cli.command('bench')
@click.argument('corpus', type=click.File('r', encoding='utf-8'))
@click.option('--mode', 'modes', type=click.Choice([m.value for m in TrainMode]), multiple=True,
              default=(TrainMode.LOCKED.value, TrainMode.LOCKFREE.value),
              help='Parallel modes to time (repeatable)')
@click.option('--threads', 'threads', type=int, multiple=True, default=(2, 4, 8),
              help='Worker counts to time (repeatable)')
@click.option('--repetitions', type=int, default=3, help='Timed passes after the warm-up')
@click.option('--order', type=click.Choice(['1', '2']), default=str(config.ORDER))
@click.option('--hash-bits', type=int, default=config.HASH_BITS)
@click.option('--seed', type=int, default=config.SEED)
@click.option('--backend', type=click.Choice(BACKENDS), default=config.BACKEND)
@click.option('--heldout', type=click.File('r', encoding='utf-8'), default=None,
              help='Held-out CoNLL file for a UAS column')
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), default=None,
              help='Write the rows as CSV')
@click.option('--trace', 'trace_path', type=click.Path(dir_okay=False), default=None,
              help='Write the rows as JSON lines')
@click.option('--output', type=click.Path(file_okay=False), default=None,
              help='Report directory')
def bench_command(corpus, modes, threads, repetitions, order, hash_bits, seed, backend, heldout,
                  csv_path, trace_path, output):
    """Time training passes for each (mode, k) against the sequential baseline"""
    feature_config = _feature_config(hash_bits, int(order))
    examples, _ = trainable_examples(_read_examples(corpus))
    heldout_examples = _read_examples(heldout) if heldout is not None else None
    try:
        bench_config = BenchConfig(
            modes=tuple(TrainMode(m) for m in modes),
            threads=tuple(threads),
            repetitions=repetitions,
            seed=seed,
            backend=Backend(backend),
        )
    except ValidationError as e:
        raise click.UsageError(str(e))

    results = bench(examples, feature_config, bench_config, heldout_examples)
    console.print(results_table(results))

    if csv_path:
        write_csv(results, csv_path)
    if trace_path:
        with open(trace_path, 'w', encoding='utf-8') as f:
            write_records(results, f)
    _report("bench", {"results": [result.to_dict() for result in results]}, output)


@cli.command('convlab')
@click.option('--k', 'k', type=int, default=4, help='Workers / updates per time step')
@click.option('--delta', type=float, default=0.5, help='Target margin of the planted grammar')
@click.option('--sentences', type=int, default=200, help='Sentences to generate')
@click.option('--seed', type=int, default=config.SEED)
@click.option('--max-length', type=int, default=6, help='Longest generated sentence')
@click.option('--order', type=click.Choice(['1', '2']), default='1')
@click.option('--max-steps', type=int, default=DEFAULT_MAX_STEPS,
              help='Step cap for the full-delay run')
@click.option('--epochs', type=int, default=None,
              help='Epoch cap for sequential and lock-free runs (default: from the bound)')
@click.option('--backend', type=click.Choice(BACKENDS), default=config.BACKEND)
@click.option('--json', 'as_json', is_flag=True, help='Print the machine-readable record')
@click.option('--output', type=click.Path(file_okay=False), default=None,
              help='Report directory')
def convlab(k, delta, sentences, seed, max_length, order, max_steps, epochs, backend, as_json,
            output):
    """Check mistake bounds on a generated separable corpus"""
    if k < 1:
        raise click.UsageError(f"--k must be positive, got {k}")
    try:
        spec = SeparableSpec(
            n_sentences=sentences,
            delta=delta,
            seed=seed,
            max_length=max_length,
            min_length=min(2, max_length),
            order=int(order),
        )
    except ValidationError as e:
        raise click.UsageError(str(e))

    with err_console.status("Running convergence experiment..."):
        experiment = run_convergence_experiment(
            spec, k, max_steps=max_steps, epochs=epochs, backend=Backend(backend)
        )

    if as_json:
        click.echo(json.dumps(experiment.to_dict(), sort_keys=True))
    else:
        for report in experiment.reports:
            console.print(Panel(report.render(), title=f"{report.mode} k={report.k}"))
        verdict = "[green]bounds hold[/green]" if experiment.all_worst_verdicts_pass \
            else "[red]bound violated[/red]"
        console.print(f"delta={experiment.delta:.6g} R={experiment.radius:.6g}: {verdict}")
    _report("convlab", experiment.to_dict(), output)


@cli.command('curve')
@click.argument('corpus', type=click.File('r', encoding='utf-8'))
@click.argument('heldout', type=click.File('r', encoding='utf-8'))
@click.option('--order', type=click.Choice(['1', '2']), default=str(config.ORDER))
@click.option('--mode', type=click.Choice([m.value for m in TrainMode]),
              default=TrainMode.SEQUENTIAL.value)
@click.option('--threads', type=int, default=1)
@click.option('--epochs', type=int, default=config.EPOCHS)
@click.option('--hash-bits', type=int, default=config.HASH_BITS)
@click.option('--seed', type=int, default=config.SEED)
@click.option('--backend', type=click.Choice(BACKENDS), default=config.BACKEND)
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), default=None)
def curve(corpus, heldout, order, mode, threads, epochs, hash_bits, seed, backend, csv_path):
    """Held-out UAS after every training epoch"""
    feature_config = _feature_config(hash_bits, int(order))
    examples, _ = trainable_examples(_read_examples(corpus))
    try:
        train_config = TrainConfig(
            epochs=epochs, threads=threads, mode=TrainMode(mode), seed=seed,
            order=int(order), backend=Backend(backend),
        )
    except ValidationError as e:
        raise click.UsageError(str(e))

    points = learning_curve(examples, _read_examples(heldout), feature_config, train_config)
    table = Table(title="Learning curve")
    table.add_column("Epoch", justify="right")
    table.add_column("Held-out UAS", justify="right")
    for epoch, score in points:
        table.add_row(str(epoch), f"{100 * score:.2f}")
    console.print(table)
    if csv_path:
        pd.DataFrame(points, columns=["epoch", "uas"]).to_csv(csv_path, index=False)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Invoke the CLI and map failures to exit codes"""
    try:
        result = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="dep-tools",
            standalone_mode=False,
        )
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        err_console.print("[red]Aborted[/red]")
        return EXIT_USAGE
    except DataError as e:
        debug_log.error_trace("Input data rejected", e)
        err_console.print(f"[red]❌ {e}[/red]")
        return EXIT_DATA
    except (ContractViolation, TrainingError) as e:
        debug_log.error_trace("Internal failure", e)
        err_console.print(f"[red]❌ {type(e).__name__}: {e}[/red]")
        return EXIT_INTERNAL
    return result if isinstance(result, int) else EXIT_OK


def main():
    """Main entry point for the dep-tools command"""
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
