"""
This file provides all kinds of configurable parameters for different application modules. Also, this is a source of the
default run config file eisenstein.ini.

Bottom part of the file contains some definitions targeting the environment (cache location overrides). They have no
effect on normal runs.
"""

import logging
import os


config_file_name = 'eisenstein.ini'

config_default = dict(
    # "engine" section tunes the computational core
    engine={
        # Primes l giving the generators T_l - (l + 1) of the Eisenstein ideal we start with. The level N itself is
        # skipped automatically
        'generators': '2 3 5 7 11 13',

        # Generator set is enlarged prime by prime until the filtration stays unchanged twice in a row. Going past
        # this bound is reported as an instability
        'generators_max_prime': 97,

        # Add w_N + 1 to the generators (needs the Atkin-Lehner matrix which is costly for large N)
        'with_atkin_lehner': False,

        # Degrees of the isogenies used by the supersingular Hecke checks (only 3 and 5 are supported)
        'isogeny_degrees': '3 5',

        # Hecke operators verified to kill the Eisenstein element (m0+)
        'hecke_check_primes': '2 3 5 7 11 13',

        # Randomized self-checks (e.g. the Bernardi identity) draw that many samples from a seeded generator
        'identity_samples': 20,
        'random_seed': 0
    },

    # "app" section controls the runner and the output
    app={
        'format': 'json',  # json (JSON Lines), csv or human
        'cache_dir': '',  # empty: no caching
        'threads': 1,
        'budget_secs': 600,  # per work item, 0 disables the budget
        'timings': False  # put elapsed seconds into the records (makes the output non-reproducible)
    }
)

# Values to match with on user input (both config and CLI) (use in conjunction with .lower() to ignore case)
none_options = ['none', 'no', 'null', '0']
no_options = ['n', 'no', 'false', '0']
yes_options = ['y', 'yes', 'true', '1']

output_formats = ['json', 'csv', 'human']

# Bumped whenever the record layout changes. Consumers should check it
schema_version = 1

log_fieldwidth_function = 26

show_traceback_threshold_level = logging.DEBUG  # when log some error and need to print a traceback

# Largest modulus for which the numpy int64 fast path is exact (products of three residues must fit into 63 bits)
int64_modulus_bound = 2 ** 21


#
# Environment overrides, kept out of the main dict definition above
#
CACHE_DIR_ENV_VARIABLE = os.environ.get('EISENSTEIN_CACHE_DIR')
if CACHE_DIR_ENV_VARIABLE is not None:
    config_default['app']['cache_dir'] = CACHE_DIR_ENV_VARIABLE
