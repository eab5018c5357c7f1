from setuptools import setup

setup(name="donaldson_gluing",
      version="0.3.0",
      maintainer="donaldson_gluing developers",
      author="donaldson_gluing developers",
      description="Exact Donaldson series of 4-manifolds glued along surfaces",

      license="GPL3",

      packages=['donaldson_gluing',
                'donaldson_gluing.catalog'],

      install_requires=['sympy'],
      extras_require={'test': ['hypothesis']},

      entry_points={
          'console_scripts': ['donaldson_gluing = donaldson_gluing.cli:main']
      }
      )
