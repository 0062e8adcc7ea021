from os import path

from setuptools import find_packages, setup

dirname = path.abspath(path.dirname(__file__))
with open(path.join(dirname, 'README.md')) as f:
    long_description = f.read()

setup(
    name='attndynamics',
    version='0.1.0',
    packages=find_packages(),
    description='training dynamics of a one-layer softmax-attention transformer on even pairs and parity',
    license='BSD 3-clause',
    classifiers=[
         'Development Status :: 3 - Alpha',
         'Intended Audience :: Science/Research',
         'Programming Language :: Python :: 3',
         'Programming Language :: Python :: 3.7',
         'Programming Language :: Python :: 3.8',
         'Programming Language :: Python :: 3.9'
    ],
    install_requires=open('requirements.txt').readlines(),
    python_requires='>=3.7, <4',
    package_data={'attndynamics': ['presets/*.json']},
    include_package_data=True,
    keywords='transformer attention implicit bias max-margin chain-of-thought parity',
    entry_points={
        'console_scripts': [
          'attndynamics = attndynamics.__main__:main'
        ]
    },
    long_description=long_description,
    long_description_content_type='text/markdown'
)
