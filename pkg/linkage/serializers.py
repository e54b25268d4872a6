"""
JSON serializers for rings, modules, certificates, link chains and matrix
chains. Polynomials travel in canonical string form and are parsed back
through the ring passed in the serializer context (``context['ring']``).
"""

from rest_framework import serializers

from algebra.exceptions import AlgebraError
from algebra.fmodule import ModuleMap, PresentedModule, Verdict, ext_module, twist
from linkage.exceptions import LinkageError, VerificationError
from linkage.liaison import LinkChain, QGCert, link
from linkage.matlink import (
    MatLinkChain,
    MatMove,
    PolyMatrix,
    Preparation,
    SymLinkStep,
    Transport,
    verify_matrix_link_modules,
    verify_shift,
    verify_split_off,
)


def _ring_from_context(field):
    ring = field.context.get('ring')
    if ring is None:
        raise serializers.ValidationError('A polynomial ring is required in the serializer context.')
    return ring


class PolynomialField(serializers.Field):
    """
    Polynomial in canonical string form
    """

    def to_representation(self, value):
        return _ring_from_context(self).format(value)

    def to_internal_value(self, data):
        if not isinstance(data, str):
            raise serializers.ValidationError('Polynomials are written as strings.')
        try:
            return _ring_from_context(self).parse(data)
        except AlgebraError as e:
            raise serializers.ValidationError(str(e))


def polynomial_rows(**kwargs):
    return serializers.ListField(child=serializers.ListField(child=PolynomialField()), **kwargs)


def polynomial_list(**kwargs):
    return serializers.ListField(child=PolynomialField(), **kwargs)


def integer_list(**kwargs):
    return serializers.ListField(child=serializers.IntegerField(), **kwargs)


class RingSerializer(serializers.Serializer):
    """
    Serializer for the polynomial ring context
    """
    variables = serializers.ListField(child=serializers.CharField())
    characteristic = serializers.IntegerField(min_value=3)


class BettiTableField(serializers.Field):
    """
    Betti table ``{homological degree: {internal degree: count}}``; JSON keys are strings
    """

    def to_representation(self, value):
        return {str(i): {str(j): count for j, count in row.items()} for i, row in value.items()}

    def to_internal_value(self, data):
        try:
            return {int(i): {int(j): int(count) for j, count in row.items()} for i, row in data.items()}
        except (AttributeError, TypeError, ValueError):
            raise serializers.ValidationError('Malformed Betti table.')


class ModuleSerializer(serializers.Serializer):
    """
    Serializer for a presented module coker(relations)
    """
    row_twists = integer_list()
    relations = polynomial_rows(allow_empty=True)
    column_degrees = integer_list(allow_empty=True)

    def validate(self, data):
        """
        Validate the shape of the presentation
        """
        if len(data['relations']) != len(data['column_degrees']):
            raise serializers.ValidationError('Every relation needs exactly one column degree.')
        rank = len(data['row_twists'])
        for column in data['relations']:
            if len(column) != rank:
                raise serializers.ValidationError(f'Relation of length {len(column)} for {rank} generators.')
        return data

    def create(self, validated_data):
        try:
            return PresentedModule(
                self.context['ring'],
                validated_data['row_twists'],
                validated_data['relations'],
                validated_data['column_degrees'],
            )
        except AlgebraError as e:
            raise serializers.ValidationError(str(e))


class HilbertSummarySerializer(serializers.Serializer):
    """
    Serializer for Hilbert data: dimension, degree, regularity index and initial degree
    """
    dimension = serializers.SerializerMethodField()
    degree = serializers.IntegerField()
    regularity_index = serializers.IntegerField(allow_null=True)
    initial_degree = serializers.IntegerField(allow_null=True)
    numerator = serializers.SerializerMethodField()

    def get_dimension(self, data):
        return None if data.is_zero else data.dimension

    def get_numerator(self, data):
        return {str(k): c for k, c in data.reduced_numerator}


class QGCertSerializer(serializers.Serializer):
    """
    Serializer for quasi-Gorenstein certificates; deserializing re-verifies the certificate
    """
    module = ModuleSerializer()
    codim = serializers.IntegerField(min_value=0)
    s = serializers.IntegerField()
    t = serializers.IntegerField()
    alpha = polynomial_rows(source='alpha.images')
    betti_table = BettiTableField(source='resolution.betti_table', read_only=True)

    def create(self, validated_data):
        module = ModuleSerializer(context=self.context).create(validated_data['module'])
        codim, s = validated_data['codim'], validated_data['s']
        try:
            ext = twist(ext_module(module, codim), s)
            alpha = ModuleMap(module, ext, validated_data['alpha']['images'])
        except AlgebraError as e:
            raise serializers.ValidationError(f'Certificate does not rebuild: {e}')
        cert = QGCert(module, module.resolution, codim, s, validated_data['t'], alpha)
        report = cert.verify()
        failed = [key for key, value in report.items() if not value]
        if failed:
            raise VerificationError(f'Certificate fails: {", ".join(failed)}', report)
        return cert


class LinkStepSerializer(serializers.Serializer):
    """
    Serializer for one direct link; deserializing recomputes the link and compares it with the record
    """
    source = ModuleSerializer()
    cert = QGCertSerializer()
    phi = polynomial_rows(source='phi.images')
    result = ModuleSerializer()
    result_map = polynomial_rows(source='result_map.images', read_only=True)
    t = serializers.IntegerField(read_only=True)
    degrees = serializers.SerializerMethodField()
    artifacts = serializers.DictField(child=serializers.BooleanField(), read_only=True)

    def get_degrees(self, step):
        return {
            'source': step.source.hilbert.degree,
            'linking': step.cert.module.hilbert.degree,
            'result': step.result.hilbert.degree,
        }

    def create(self, validated_data):
        source = ModuleSerializer(context=self.context).create(validated_data['source'])
        cert = QGCertSerializer(context=self.context).create(validated_data['cert'])
        recorded = ModuleSerializer(context=self.context).create(validated_data['result'])
        try:
            phi = ModuleMap(cert.module, source, validated_data['phi']['images'])
            step = link(source, cert, phi)
        except (AlgebraError, LinkageError) as e:
            raise VerificationError(f'Recorded link does not replay: {e}')
        if step.result.relations != recorded.relations or step.result.row_twists != recorded.row_twists:
            raise VerificationError('Replayed link differs from the recorded result')
        return step


class IsomorphismVerdictField(serializers.Field):
    """
    Junction verdicts keyed by step index
    """

    def to_representation(self, value):
        return {str(k): getattr(v, 'verdict', v).value for k, v in value.items()}

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            raise serializers.ValidationError('Junctions must be an object.')
        try:
            return {int(k): Verdict(v) for k, v in data.items()}
        except ValueError:
            raise serializers.ValidationError('Junctions map step indices to YES, NO or UNKNOWN.')


class LinkChainSerializer(serializers.Serializer):
    """
    Serializer for link chains
    """
    parity = serializers.CharField(read_only=True)
    steps = LinkStepSerializer(many=True)
    junctions = IsomorphismVerdictField(required=False)

    def validate_junctions(self, value):
        """
        Validate that no recorded junction was refuted
        """
        if any(verdict is Verdict.NO for verdict in value.values()):
            raise serializers.ValidationError('A junction was recorded as non-isomorphic.')
        return value

    def create(self, validated_data):
        steps = [LinkStepSerializer(context=self.context).create(step) for step in validated_data['steps']]
        return LinkChain(steps, dict(validated_data.get('junctions', {})))


class PolyMatrixSerializer(serializers.Serializer):
    """
    Serializer for graded polynomial matrices
    """
    rows = polynomial_rows(allow_empty=True)
    row_twists = integer_list(allow_empty=True)
    column_degrees = integer_list(allow_empty=True)

    def create(self, validated_data):
        try:
            return PolyMatrix(
                self.context['ring'],
                validated_data['rows'],
                validated_data['row_twists'],
                validated_data['column_degrees'],
            )
        except AlgebraError as e:
            raise serializers.ValidationError(str(e))


class TransformsSerializer(serializers.Serializer):
    """
    Serializer for the row and column transforms of a preparation
    """
    left = PolyMatrixSerializer()
    right = PolyMatrixSerializer()
    operations = serializers.SerializerMethodField()

    def get_operations(self, preparation):
        ring = self.context['ring']
        described = []
        for operation in preparation.operations:
            if operation[0].startswith('swap'):
                described.append(f'{operation[0]} {operation[1]} {operation[2]}')
            else:
                described.append(f'{operation[0]} {operation[1]} += ({ring.format(operation[3])}) * {operation[2]}')
        return described


class SymLinkStepSerializer(serializers.Serializer):
    """
    Serializer for matrix link steps: {A, B, S, lambda, transforms, detS}
    """
    A = PolyMatrixSerializer(source='matrix')
    B = PolyMatrixSerializer(source='linked')
    S = PolyMatrixSerializer(source='product')
    scalar = PolynomialField(source='scalar')
    transforms = TransformsSerializer(source='preparation', read_only=True)
    detS = PolynomialField(source='det', read_only=True)
    twist = serializers.IntegerField(read_only=True)

    def get_fields(self):
        fields = super().get_fields()
        # 'lambda' is a keyword, so the field is declared under another name
        fields['lambda'] = fields.pop('scalar')
        return fields

    def create(self, validated_data):
        matrix = PolyMatrixSerializer(context=self.context).create(validated_data['matrix'])
        linked = PolyMatrixSerializer(context=self.context).create(validated_data['linked'])
        product = PolyMatrixSerializer(context=self.context).create(validated_data['product'])
        if not (matrix.is_square and linked.is_square and product.is_square) or matrix.nrows != linked.nrows:
            raise VerificationError('Recorded matrices have incompatible shapes')

        # B carries the row twists of A; B^t is regraded onto the columns of A
        s = -(product.column_degrees[0] + product.row_twists[0])
        transposed = linked.transpose()
        try:
            linked_transpose = PolyMatrix(
                linked.ring,
                transposed.rows,
                tuple(a - s for a in transposed.row_twists),
                tuple(b - s for b in transposed.column_degrees),
            )
            recomputed = matrix @ linked_transpose
        except AlgebraError as e:
            raise VerificationError(f'Recorded matrix link does not regrade: {e}')
        if recomputed.rows != product.rows:
            raise VerificationError('A * B^t differs from the recorded S')

        ring = matrix.ring
        preparation = Preparation(
            matrix,
            matrix,
            PolyMatrix.identity(ring, matrix.row_twists),
            PolyMatrix.identity(ring, matrix.column_degrees),
        )
        transport = Transport(PolyMatrix.identity(ring, (0,)), validated_data['scalar'])
        step = SymLinkStep(preparation, linked_transpose, product, validated_data['scalar'], transport)
        report = step.verify()
        failed = [key for key, value in report.items() if not value]
        if failed:
            raise VerificationError(f'Matrix link fails: {", ".join(failed)}', report)
        verify_matrix_link_modules(step)
        return step


class MatMoveSerializer(serializers.Serializer):
    """
    Serializer for module-level moves between matrix links
    """
    kind = serializers.CharField()
    detail = serializers.SerializerMethodField()
    checks = serializers.DictField(child=serializers.BooleanField(), read_only=True)

    def get_detail(self, move):
        ring = self.context['ring']
        return {
            key: value if isinstance(value, int) else ring.format(value)
            for key, value in move.detail.items()
        }


class MatLinkChainSerializer(serializers.Serializer):
    """
    Serializer for matrix reduction chains
    """
    original = PolyMatrixSerializer()
    steps = SymLinkStepSerializer(many=True)
    moves = MatMoveSerializer(many=True, read_only=True)
    final = PolyMatrixSerializer()

    def create(self, validated_data):
        original = PolyMatrixSerializer(context=self.context).create(validated_data['original'])
        steps = [SymLinkStepSerializer(context=self.context).create(step) for step in validated_data['steps']]
        final = PolyMatrixSerializer(context=self.context).create(validated_data['final'])
        if final.nrows != 1:
            raise VerificationError('A reduction chain must end in a 1x1 matrix')

        moves = []
        last = original
        for step in steps:
            linked = step.linked
            if step.matrix.nrows == 1:
                moves.append(MatMove('bridge', {'from': step.matrix.rows[0][0], 'to': step.scalar}))
                last = linked
                continue
            moves.append(MatMove('split_off', {
                'scalar': step.scalar,
                'twist': linked.row_twists[0],
                'remaining': linked.nrows - 1,
            }, verify_split_off(step)))
            last = step.next_matrix
        if final.row_twists != last.row_twists:
            origin = last.row_twists[0]
            last, checks = verify_shift(last, final.row_twists[0])
            moves.append(MatMove('shift', {'from': origin, 'to': final.row_twists[0]}, checks))
        if last.rows != final.rows or last.column_degrees != final.column_degrees:
            raise VerificationError('The recorded final matrix is not the end of the chain')
        return MatLinkChain(original, tuple(steps), tuple(moves), final=final)
