"""Command line front end for the WLS library (console script ``wls``)."""
