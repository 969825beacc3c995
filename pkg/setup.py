from setuptools import setup


setup(
      name='pymintej',    # This is the name of your PyPI-package.
      version='0.1.0',
      description='Minimalistic modal terminal editor for Julia-like programs',
      author='pymintej developers',
      packages=['pymintej'],
      package_data={'pymintej': ['data/syntax_db.txt']},
      install_requires=[
            'numpy','matplotlib','psutil'
      ],
      extras_require={
            'test': ['pytest'],
      },
      entry_points={
            'console_scripts': ['mintej=pymintej.shell:main'],
      },
)
