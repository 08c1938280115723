# -*- coding: utf-8 -*-
"""``requests`` adapter for ``resource://<package>/<path>`` URLs"""

import importlib.resources
import io
import locale

from requests import codes, Response
from requests.adapters import BaseAdapter
from requests.compat import urlparse


class ResourceAdapter(BaseAdapter):
    """Adapter to files shipped inside installed packages"""

    def send(self, request, **kwargs):
        """Read package data through ``importlib.resources``

        The host name is interpreted as the package name
        """
        if request.method not in ('GET', 'HEAD'):
            raise ValueError('Invalid request method {}'.format(
                request.method))
        url_parts = urlparse(request.url)
        if not url_parts.netloc:
            raise ValueError(
                'resource: hostname interpreted as package name')
        pkg_name = url_parts.netloc

        resp = Response()
        resp.url = request.url
        try:
            data = importlib.resources.files(pkg_name).joinpath(
                url_parts.path.lstrip('/')).read_bytes()
        except (FileNotFoundError, ModuleNotFoundError) as e:
            resp.status_code = codes.not_found
            # Error message is localized, encode as the locale does
            resp_str = str(e).encode(locale.getpreferredencoding(False))
            resp.raw = io.BytesIO(resp_str)
            resp.headers['Content-Length'] = len(resp_str)
            resp.raw.release_conn = resp.raw.close
        else:
            resp.status_code = codes.ok
            resp.raw = io.BytesIO(data)
        return resp

    def close(self):
        pass
