# -*- coding: utf-8 -*-
"""Code for resolving ``"$ref"`` references in scenario documents

Generators and forcings are usually shared between scenarios, e.g.

.. code-block:: json

    "generator": {"$ref": "resource://logcalc/data/generators.json#/rotation"}

Keys next to ``"$ref"`` take precedence over the included ones.
"""

from collections.abc import MutableMapping, MutableSequence
import logging
import os
from urllib.parse import urlparse

import jsonpath_rw
import requests
from requests.exceptions import HTTPError
import requests_file

try:
    import ruamel.yaml as ruamel_yaml
    YAML_AVAILABLE = True
except ImportError:
    YAML_AVAILABLE = False

from . import requests_resource
from .exceptions import RefResolutionException

LOGGER = logging.getLogger(__name__)


class RefResolver:
    """Helper class for resolving JSON pointers in "$ref" properties

    The resolver does not perform inline updates but rather creates new
    dicts and lists with copies.
    """

    def __init__(self, lookup_paths=None, dict_class=dict):
        #: Loaded documents by URI (without fragment)
        self.cache = {}
        self.dict_class = dict_class
        self.lookup_paths = list(lookup_paths or [])
        #: whether or not to resolve relative paths using ``lookup_paths``
        self.rel_cwd_paths = True
        #: URI of the document being resolved
        self.doc_uri = None

    def resolve(self, doc_uri, obj):
        """Entry point for resolving JSON pointers

        doc_uri is the URI of the JSON document in obj.

        obj can either be a dict or list object (possibly of a sub class)

        raises RefResolutionException on problems with the resolution
        """
        self.doc_uri = doc_uri
        self.cache = {doc_uri: obj}
        session = requests.Session()
        session.mount('file://', requests_file.FileAdapter())
        session.mount('resource://', requests_resource.ResourceAdapter())
        with session:
            return self._resolve(obj, type(obj)(), session)

    def _resolve(self, obj, lower, session):
        """Resolve ``obj``, merged on top of the resolved value ``lower``"""
        if isinstance(obj, (int, bool, float, str)):  # JSON atomic
            return obj
        elif isinstance(obj, (dict, MutableMapping)):  # JSON object
            return self._resolve_dict_entry(obj, lower, session)
        elif isinstance(obj, (list, MutableSequence)):  # JSON list
            return [self._resolve(elem, type(elem)(), session)
                    for elem in obj]
        else:
            raise RefResolutionException(
                'Can only resolve in dict and list container objects and '
                'the atomic types int, bool, float, and str.')

    def _resolve_dict_entry(self, obj, lower, session):
        """Implementation for dict objects"""
        # Follow '$ref' chains, then merge with left-most precedence
        if lower:
            objs = [self._resolve_dict_entry(obj, self.dict_class(), session),
                    lower]
        else:
            objs = [obj]
        imported = set()
        while '$ref' in objs[-1]:
            last = objs[-1]
            if last['$ref'] in imported:
                raise RefResolutionException(
                    'Detected recursion when including {}'.format(
                        last['$ref']))
            imported.add(last['$ref'])
            objs.append(self._load_ref(last['$ref'], session))
        result = self.dict_class()
        for item in reversed(objs):
            for k, v in item.items():
                if k == '$ref':
                    continue
                if k in result and isinstance(result[k], MutableMapping):
                    result[k] = self._resolve(v, result[k], session)
                else:
                    result[k] = self._resolve(v, type(v)(), session)
        return result

    def _load_ref(self, ref_uri, session):
        """Resolve "$ref" URI ``ref_uri``"""
        LOGGER.debug('Resolving $ref URI %s', ref_uri)
        parsed_ref_uri = self._parse_ref_uri(ref_uri)
        ref_file = parsed_ref_uri.netloc + parsed_ref_uri.path
        if not ref_file:  # relative to current doc, already in cache
            cache_key = self.doc_uri
        else:
            cache_key = parsed_ref_uri._replace(fragment='').geturl()
            if cache_key not in self.cache:
                self.cache[cache_key] = self._load_for_cache(
                    parsed_ref_uri, session)
        ref_json = self.cache[cache_key]
        expr = jsonpath_rw.parse(
            '$' + '.'.join(parsed_ref_uri.fragment.split('/')))
        for match in expr.find(ref_json):
            return match.value  # return first match only
        raise RefResolutionException(
            'Could not resolve reference URI "{}"'.format(ref_uri))

    def _parse_ref_uri(self, ref_uri):
        parsed_ref_uri = urlparse(ref_uri)
        if (self.rel_cwd_paths and parsed_ref_uri.scheme == 'file' and
                parsed_ref_uri.netloc):
            for path in self.lookup_paths:
                abspath = os.path.join(
                    os.path.abspath(path), parsed_ref_uri.netloc)
                if os.path.exists(abspath):
                    tmp = 'file://' + abspath
                    tmp += ref_uri[len('file://' + parsed_ref_uri.netloc):]
                    return urlparse(tmp)
            raise RefResolutionException(
                'Could not find local file {}'.format(parsed_ref_uri.netloc))
        return parsed_ref_uri

    def _load_for_cache(self, parsed_uri, session):
        """Load document from URI without cache"""
        remote_uri = '{}://{}/{}'.format(
            parsed_uri.scheme, parsed_uri.netloc, parsed_uri.path)
        LOGGER.debug('Loading URI %s', remote_uri)
        try:
            response = session.get(remote_uri)
            response.raise_for_status()
        except (HTTPError, OSError, ValueError) as e:
            raise RefResolutionException(
                'Could not load file {}'.format(parsed_uri.geturl())) from e
        return self._load_json(response)

    def _load_json(self, response):
        if YAML_AVAILABLE:
            yaml = ruamel_yaml.YAML(typ='safe', pure=True)
            return yaml.load(response.text)
        else:
            return response.json(object_pairs_hook=self.dict_class)
