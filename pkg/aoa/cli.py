#!/usr/bin/env python
import argparse
import datetime
import os
import sys
import traceback

import yaml

from aoa import Config
from aoa.job import Job
from aoa.misc import aoa_base_dir, get_git_revision_short_hash
from aoa.util.maze_dataset import add_generate_parser, generate
from aoa.util.report import add_report_parser, report

#: commands that create and run a job of the given type
JOB_COMMANDS = {
    "solve": "Perform a single seeded run on a single instance",
    "bench": "Run the repeated-runs statistics protocol over a set of instances",
    "sweep": "Run a bench for every cell of a parameter grid and rank the cells",
}


def argparse_bool_type(v):
    "Type for argparse that correctly treats Boolean values"
    if isinstance(v, bool):
        return v
    if v.lower() in ("yes", "true", "t", "y", "1"):
        return True
    elif v.lower() in ("no", "false", "f", "n", "0"):
        return False
    else:
        raise argparse.ArgumentTypeError("Boolean value expected.")


def create_parser(config, additional_args=[]):
    # define short option names
    short_options = {
        "job.type": "-j",
        "algorithm": "-a",
        "dataset.folder": "-d",
        "bench.runs": "-r",
    }

    # create parser for config
    parser_conf = argparse.ArgumentParser(add_help=False)
    for key, value in Config.flatten(config.options).items():
        short = short_options.get(key)
        argtype = type(value)
        if argtype == bool:
            argtype = argparse_bool_type
        elif argtype == list:
            # parsed by Config.set, e.g. "[0,30]" or "0,30"
            argtype = str
        if short:
            parser_conf.add_argument("--" + key, short, type=argtype)
        else:
            parser_conf.add_argument("--" + key, type=argtype)

    # add additional arguments
    for key in additional_args:
        parser_conf.add_argument(key)

    # create main parsers and subparsers
    parser = argparse.ArgumentParser("aoa")
    subparsers = parser.add_subparsers(title="command", dest="command")
    subparsers.required = True

    for command, help in JOB_COMMANDS.items():
        p = subparsers.add_parser(command, help=help, parents=[parser_conf])
        p.add_argument(
            "config",
            type=str,
            nargs="?",
            help="Configuration file (YAML, JSON or flat key=value)",
        )
        p.add_argument("--folder", "-f", type=str, help="Output folder to use")
        if command == "sweep":
            p.add_argument(
                "--grid",
                "-g",
                type=str,
                help="Grid file or name of a preset grid (sets sweep.grid)",
            )

    add_generate_parser(subparsers)
    add_report_parser(subparsers)
    return parser


def main():
    # default config
    config = Config()

    # now parse the arguments
    parser = create_parser(config)
    args, unknown_args = parser.parse_known_args()

    # If there where unknown args, add them to the parser and reparse. The correctness
    # of these arguments will be checked later.
    if len(unknown_args) > 0:
        parser = create_parser(
            config, filter(lambda a: a.startswith("--"), unknown_args)
        )
        args = parser.parse_args()

    # commands without a job
    if args.command == "generate":
        generate(args)
        return
    if args.command == "report":
        report(args)
        return

    if args.config is not None:
        if not vars(args)["console.quiet"]:
            print("Loading configuration {}...".format(args.config))
        config.load(args.config)
    config.set("job.type", args.command)
    if args.command == "sweep" and args.grid is not None:
        config.set("sweep.grid", args.grid)

    # overwrite configuration with command line arguments
    for key, value in vars(args).items():
        if key in ["command", "config", "folder", "grid"]:
            continue
        if value is not None:
            try:
                if isinstance(config.get(key), bool):
                    value = argparse_bool_type(value)
            except KeyError:
                pass
            config.set(key, value)
            if key == "algorithm":
                config._import(value)

    # initialize output folder
    if args.folder is None:  # means: set default
        if args.config is not None:
            config_name = os.path.splitext(os.path.basename(args.config))[0]
        else:
            config_name = args.command
        config.folder = os.path.join(
            aoa_base_dir(),
            "local",
            "experiments",
            datetime.datetime.now().strftime("%Y%m%d-%H%M%S") + "-" + config_name,
        )
    else:
        config.folder = args.folder

    # catch errors to log them
    try:
        if not config.init_folder():
            raise ValueError("output folder {} exists already".format(config.folder))
        config.log("Using folder: {}".format(config.folder))

        job = Job.create(config)

        # log configuration
        config.log("Configuration:", echo=False)
        config.log(yaml.dump(config.options), echo=False, prefix="  ")
        config.log(
            "git commit: {}".format(get_git_revision_short_hash()),
            echo=False,
            prefix="  ",
        )

        job.run()
    except BaseException:
        tb = traceback.format_exc()
        config.log(tb, echo=False)
        raise


if __name__ == "__main__":
    sys.exit(main())
