import traceback
import sys

from django.core.management.base import BaseCommand

try:
    from pudb import post_mortem
except ImportError:
    from pdb import post_mortem

from heardof import jobs

import logging
logger = logging.getLogger(__name__)

class Command(BaseCommand):
    help = "Runs a job, which is a no-arguments function in the project's jobs.py"

    def add_arguments(self, parser):
        parser.add_argument('jobname', type=str)
        parser.add_argument('--pdb', action='store_true', dest='pdb',
            help='Launch into Python debugger on exception')

    def handle(self, jobname, **options):
        job = getattr(jobs, jobname, None)
        if job is None or jobname.startswith('_') or not callable(job):
            return logger.error("No job named %s in heardof/jobs.py" % jobname)
        try:
            job()
        except Exception as e:
            if options.get('pdb'):
                traceback.print_exc(file=sys.stderr)
                post_mortem()
            else:
                logger.exception("Exception in job %s: %r" % (jobname, e))
            raise
